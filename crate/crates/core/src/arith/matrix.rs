use std::fmt;

use super::echelon::{Echelon, Rref};
use super::field::{Field, Scalar};
use super::{ArithError, SparseVec};

/// Sparse matrix with column-major storage.
///
/// Columns are sorted `(row, value)` lists with no stored zeros. All entries
/// share the field context carried by the matrix.
#[derive(Clone, PartialEq)]
pub struct ExactMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<F>>,
}

impl<F: Field> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        if self.rows <= 12 && self.cols <= 12 {
            for r in self.to_dense() {
                let cells: Vec<String> = r.iter().map(|x| self.field.format(x)).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let columns = (0..n).map(|i| vec![(i, one.clone())]).collect();
        ExactMatrix {
            field,
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Builds from sparse columns; entries are sorted and zeros dropped.
    pub fn from_columns(field: F, rows: usize, columns: Vec<SparseVec<F>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|c| normalize(&field, c))
            .collect::<Vec<_>>();
        debug_assert!(columns.iter().all(|c| c.iter().all(|(r, _)| *r < rows)));
        ExactMatrix {
            field,
            rows,
            cols,
            columns,
        }
    }

    /// Builds from a dense row-major array.
    pub fn from_dense(field: F, rows: &[Vec<F::Elem>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut columns = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (j, x) in row.iter().enumerate() {
                if !field.is_zero(x) {
                    columns[j].push((i, x.clone()));
                }
            }
        }
        ExactMatrix {
            field,
            rows: nrows,
            cols: ncols,
            columns,
        }
    }

    pub fn from_i64(field: F, rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<F::Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_dense(field, &dense)
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        field: F,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Self {
        let mut columns: Vec<SparseVec<F>> = vec![Vec::new(); cols];
        for (r, c, x) in triplets {
            assert!(r < rows && c < cols, "triplet out of range");
            columns[c].push((r, x));
        }
        Self::from_columns(field, rows, columns)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec<F> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<F>] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec<F>> {
        self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                out[*i][j] = x.clone();
            }
        }
        out
    }

    /// Sparse rows of the matrix (the columns of the transpose).
    pub fn row_vectors(&self) -> Vec<SparseVec<F>> {
        let mut rows: Vec<SparseVec<F>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                rows[*i].push((j, x.clone()));
            }
        }
        rows
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            columns: self.row_vectors(),
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), ArithError> {
        if self.field != other.field {
            return Err(ArithError::FieldMismatch(
                self.field.spec(),
                other.field.spec(),
            ));
        }
        Ok(())
    }

    /// `self * v` for a sparse column vector.
    pub fn mul_vec(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc = Accumulator::new(&self.field, self.rows);
        for (j, x) in v {
            acc.axpy(&self.field, x, &self.columns[*j]);
        }
        acc.drain(&self.field)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(ArithError::DimensionMismatch {
                op: "matmul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut acc = Accumulator::new(&self.field, self.rows);
        let columns = other
            .columns
            .iter()
            .map(|col| {
                for (j, x) in col {
                    acc.axpy(&self.field, x, &self.columns[*j]);
                }
                acc.drain(&self.field)
            })
            .collect();
        Ok(ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, ArithError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(ArithError::DimensionMismatch {
                op: if negate { "sub" } else { "add" },
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let f = &self.field;
        let coef = if negate { f.neg(&f.one()) } else { f.one() };
        let mut acc = Accumulator::new(f, self.rows);
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                acc.axpy(f, &f.one(), a);
                acc.axpy(f, &coef, b);
                acc.drain(f)
            })
            .collect();
        Ok(ExactMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(i, x)| (*i, f.mul(c, x)))
                    .filter(|(_, x)| !f.is_zero(x))
                    .collect()
            })
            .collect();
        ExactMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diagonal(field: F, blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut columns = Vec::new();
        let mut offset = 0;
        for b in blocks {
            for col in &b.columns {
                columns.push(col.iter().map(|(i, x)| (i + offset, x.clone())).collect());
            }
            offset += b.rows;
        }
        ExactMatrix {
            field,
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Selects a subset of columns, in the given order.
    pub fn select_columns(&self, which: &[usize]) -> Self {
        ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: which.len(),
            columns: which.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(ArithError::DimensionMismatch {
                op: "hstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: columns.len(),
            columns,
        })
    }

    /// Reduced row echelon form of the rows.
    pub fn rref(&self) -> Rref<F> {
        let mut e = Echelon::new(self.field.clone(), self.cols);
        for row in self.row_vectors() {
            e.insert(&row);
        }
        e.into_rref()
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        let (vectors, len) = if self.cols <= self.rows {
            (self.row_vectors(), self.cols)
        } else {
            (self.columns.clone(), self.rows)
        };
        let mut e = Echelon::new(self.field.clone(), len);
        for v in &vectors {
            e.insert(v);
            if e.rank() == len {
                break;
            }
        }
        e.rank()
    }

    /// Rank, kernel basis and pivot columns in one pass.
    pub fn rref_kernel(&self) -> RrefResult<F> {
        let rref = self.rref();
        RrefResult {
            rank: rref.rank(),
            kernel_basis: rref.kernel_basis(),
            pivot_columns: rref.pivots.clone(),
        }
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        // rows of [A | I]
        let mut e = Echelon::new(f.clone(), 2 * n);
        for (i, mut row) in self.row_vectors().into_iter().enumerate() {
            row.push((n + i, f.one()));
            e.insert(&row);
        }
        let rref = e.into_rref();
        if rref.rank() < n || rref.pivots[n - 1] >= n {
            return None;
        }
        let mut columns: Vec<SparseVec<F>> = vec![Vec::new(); n];
        for (i, row) in rref.rows.iter().enumerate() {
            for (c, x) in row {
                if *c >= n {
                    columns[c - n].push((i, x.clone()));
                }
            }
        }
        Some(ExactMatrix {
            field: f.clone(),
            rows: n,
            cols: n,
            columns,
        })
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                out.push((*i, j, self.field.to_scalar(x)));
            }
        }
        out.sort_by_key(|(i, j, _)| (*i, *j));
        out
    }
}

/// Output of [`ExactMatrix::rref_kernel`].
#[derive(Debug, Clone)]
pub struct RrefResult<F: Field> {
    pub rank: usize,
    pub kernel_basis: Vec<SparseVec<F>>,
    pub pivot_columns: Vec<usize>,
}

fn normalize<F: Field>(f: &F, mut v: SparseVec<F>) -> SparseVec<F> {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec<F> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = f.add(y, &x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !f.is_zero(x));
    out
}

/// Dense scratch vector for accumulating sparse linear combinations.
pub struct Accumulator<F: Field> {
    vals: Vec<F::Elem>,
    live: Vec<bool>,
    touched: Vec<usize>,
}

impl<F: Field> Accumulator<F> {
    pub fn new(field: &F, n: usize) -> Self {
        Accumulator {
            vals: vec![field.zero(); n],
            live: vec![false; n],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub fn add_entry(&mut self, f: &F, i: usize, x: &F::Elem) {
        if !self.live[i] {
            self.live[i] = true;
            self.touched.push(i);
            self.vals[i] = x.clone();
        } else {
            self.vals[i] = f.add(&self.vals[i], x);
        }
    }

    /// `acc += c * v`
    pub fn axpy(&mut self, f: &F, c: &F::Elem, v: &SparseVec<F>) {
        if f.is_zero(c) {
            return;
        }
        for (i, x) in v {
            let y = f.mul(c, x);
            self.add_entry(f, *i, &y);
        }
    }

    /// `acc += c * v` with every index shifted by `offset`.
    pub fn axpy_shifted(&mut self, f: &F, c: &F::Elem, v: &SparseVec<F>, offset: usize) {
        if f.is_zero(c) {
            return;
        }
        for (i, x) in v {
            let y = f.mul(c, x);
            self.add_entry(f, *i + offset, &y);
        }
    }

    /// Returns the accumulated vector and resets the scratch space.
    pub fn drain(&mut self, f: &F) -> SparseVec<F> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.live[i] = false;
            let x = std::mem::replace(&mut self.vals[i], f.zero());
            if !f.is_zero(&x) {
                out.push((i, x));
            }
        }
        self.touched.clear();
        out
    }
}
