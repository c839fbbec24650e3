//! Exact scalar arithmetic over `Q` and `F_p`, sparse matrices, and the
//! echelon/kernel routines the rest of the crate is built on.

mod echelon;
mod field;
mod matrix;

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

pub use echelon::{Echelon, Rref};
pub use field::{parse_rational, Field, FieldSpec, PrimeField, Rationals, Scalar};
pub use matrix::{Accumulator, ExactMatrix, RrefResult};

/// Sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec<F> = Vec<(usize, <F as Field>::Elem)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("characteristic {0} is not a prime below 2^31")]
    InvalidCharacteristic(u32),
    #[error("unknown field `{0}` (expected Q or F <prime>)")]
    BadFieldName(String),
    #[error("denominator of {0} vanishes modulo {1}")]
    DenominatorVanishes(String, u32),
}

/// A subspace given by a basis in "identity form": basis vector `k` is one
/// at `coord_cols[k]` and zero at every other coordinate column, so the
/// coordinates of a member are read off at those columns.
#[derive(Debug, Clone)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    basis: Vec<SparseVec<F>>,
    coord_cols: Vec<usize>,
    coord_index: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn new(
        field: F,
        ambient: usize,
        basis: Vec<SparseVec<F>>,
        coord_cols: Vec<usize>,
    ) -> Self {
        assert_eq!(basis.len(), coord_cols.len());
        let mut coord_index = vec![usize::MAX; ambient];
        for (k, &c) in coord_cols.iter().enumerate() {
            coord_index[c] = k;
        }
        Subspace {
            field,
            ambient,
            basis,
            coord_cols,
            coord_index,
        }
    }

    pub fn zero(field: F, ambient: usize) -> Self {
        Self::new(field, ambient, Vec::new(), Vec::new())
    }

    pub fn from_rref(r: Rref<F>) -> Self {
        Self::new(r.field, r.ncols, r.rows, r.pivots)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.basis
    }

    pub fn coord_cols(&self) -> &[usize] {
        &self.coord_cols
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coords(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out: SparseVec<F> = v
            .iter()
            .filter_map(|(c, x)| {
                let k = self.coord_index[*c];
                (k != usize::MAX).then(|| (k, x.clone()))
            })
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Inclusion map as an `ambient x dim` matrix.
    pub fn inclusion(&self) -> ExactMatrix<F> {
        ExactMatrix::from_columns(self.field.clone(), self.ambient, self.basis.clone())
    }
}

/// Partition of index sets by a grading key.
struct Blocks<K> {
    keys: Vec<K>,
    members: Vec<Vec<usize>>,
}

fn group_by_key<K: Hash + Eq + Clone>(keys: &[K]) -> (Blocks<K>, Vec<usize>) {
    let mut index: HashMap<&K, usize> = HashMap::new();
    let mut blocks = Blocks {
        keys: Vec::new(),
        members: Vec::new(),
    };
    let mut local = vec![0; keys.len()];
    for (i, k) in keys.iter().enumerate() {
        let b = *index.entry(k).or_insert_with(|| {
            blocks.keys.push(k.clone());
            blocks.members.push(Vec::new());
            blocks.keys.len() - 1
        });
        local[i] = blocks.members[b].len();
        blocks.members[b].push(i);
    }
    (blocks, local)
}

/// Kernel of the map whose columns are given. When a grading is supplied
/// (`row_keys`, `col_keys`) the map must be homogeneous and is split into
/// independent blocks. Basis vectors are returned in increasing order of
/// their coordinate (free) column.
pub fn kernel_of_columns<F: Field, K: Hash + Eq + Clone>(
    field: &F,
    nrows: usize,
    columns: &[SparseVec<F>],
    grading: Option<(&[K], &[K])>,
) -> Subspace<F> {
    let ncols = columns.len();
    let mut out: Vec<(usize, SparseVec<F>)> = Vec::new();
    match grading {
        None => {
            let m = ExactMatrix::from_columns(field.clone(), nrows, columns.to_vec());
            let rref = m.rref();
            for (c, v) in rref.free_columns().into_iter().zip(rref.kernel_basis()) {
                out.push((c, v));
            }
        }
        Some((row_keys, col_keys)) => {
            debug_assert_eq!(row_keys.len(), nrows);
            debug_assert_eq!(col_keys.len(), ncols);
            let (row_blocks, row_local) = group_by_key(row_keys);
            let row_block_of: HashMap<&K, usize> = row_blocks
                .keys
                .iter()
                .enumerate()
                .map(|(b, k)| (k, b))
                .collect();
            let (col_blocks, _) = group_by_key(col_keys);
            for (key, cols) in col_blocks.keys.iter().zip(&col_blocks.members) {
                let nloc_rows = row_block_of
                    .get(key)
                    .map_or(0, |&b| row_blocks.members[b].len());
                let mut local_rows: Vec<SparseVec<F>> = vec![Vec::new(); nloc_rows];
                for (j, &gc) in cols.iter().enumerate() {
                    for (r, x) in &columns[gc] {
                        debug_assert!(row_keys[*r] == *key, "map is not homogeneous");
                        local_rows[row_local[*r]].push((j, x.clone()));
                    }
                }
                let mut e = Echelon::new(field.clone(), cols.len());
                for row in &local_rows {
                    e.insert(row);
                    if e.rank() == cols.len() {
                        break;
                    }
                }
                let rref = e.into_rref();
                for (c, v) in rref.free_columns().into_iter().zip(rref.kernel_basis()) {
                    let mut g: SparseVec<F> =
                        v.into_iter().map(|(j, x)| (cols[j], x)).collect();
                    g.sort_by_key(|(i, _)| *i);
                    out.push((cols[c], g));
                }
            }
        }
    }
    out.sort_by_key(|(c, _)| *c);
    let (coord_cols, basis) = out.into_iter().unzip();
    Subspace::new(field.clone(), ncols, basis, coord_cols)
}

/// Row-reduced span of homogeneous vectors, as a global [`Rref`].
pub fn span_of<F: Field, K: Hash + Eq + Clone>(
    field: &F,
    ambient: usize,
    vectors: &[SparseVec<F>],
    keys: Option<&[K]>,
) -> Rref<F> {
    match keys {
        None => {
            let mut e = Echelon::new(field.clone(), ambient);
            for v in vectors {
                e.insert(v);
                if e.rank() == ambient {
                    break;
                }
            }
            e.into_rref()
        }
        Some(keys) => {
            let (blocks, local) = group_by_key(keys);
            let block_of: HashMap<&K, usize> =
                blocks.keys.iter().enumerate().map(|(b, k)| (k, b)).collect();
            let mut per_block: Vec<Vec<SparseVec<F>>> = vec![Vec::new(); blocks.keys.len()];
            for v in vectors {
                let Some((c0, _)) = v.first() else { continue };
                let b = block_of[&keys[*c0]];
                debug_assert!(v.iter().all(|(c, _)| keys[*c] == keys[*c0]));
                per_block[b].push(v.iter().map(|(c, x)| (local[*c], x.clone())).collect());
            }
            let mut rows: Vec<(usize, SparseVec<F>)> = Vec::new();
            for (b, vs) in per_block.into_iter().enumerate() {
                if vs.is_empty() {
                    continue;
                }
                let members = &blocks.members[b];
                let mut e = Echelon::new(field.clone(), members.len());
                for v in &vs {
                    e.insert(v);
                    if e.rank() == members.len() {
                        break;
                    }
                }
                let r = e.into_rref();
                for (p, row) in r.pivots.into_iter().zip(r.rows) {
                    let g: SparseVec<F> =
                        row.into_iter().map(|(j, x)| (members[j], x)).collect();
                    rows.push((members[p], g));
                }
            }
            rows.sort_by_key(|(p, _)| *p);
            let (pivots, rows) = rows.into_iter().unzip();
            Rref {
                field: field.clone(),
                ncols: ambient,
                pivots,
                rows,
            }
        }
    }
}

/// Rank of the map whose columns are given, split by grading when present.
pub fn rank_of_columns<F: Field, K: Hash + Eq + Clone>(
    field: &F,
    nrows: usize,
    columns: &[SparseVec<F>],
    col_keys: Option<&[K]>,
) -> usize {
    match col_keys {
        None => ExactMatrix::from_columns(field.clone(), nrows, columns.to_vec()).rank(),
        Some(keys) => {
            let (blocks, _) = group_by_key(keys);
            let mut total = 0;
            for cols in &blocks.members {
                // column vectors of one block live in a common row block
                let mut e = Echelon::new(field.clone(), nrows);
                for &c in cols {
                    e.insert(&columns[c]);
                }
                total += e.rank();
            }
            total
        }
    }
}

/// Loads an [`Rref`] back into an [`Echelon`] for repeated reductions.
pub fn echelon_from_rref<F: Field>(r: &Rref<F>) -> Echelon<F> {
    let mut e = Echelon::new(r.field.clone(), r.ncols);
    for row in &r.rows {
        e.insert(row);
    }
    e
}
