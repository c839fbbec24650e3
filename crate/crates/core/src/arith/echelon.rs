//! Row echelon forms over an exact field.
//!
//! [`Echelon`] keeps a semi-reduced basis (distinct leading columns, leading
//! coefficient one) and reduces incoming vectors against it by processing
//! columns in increasing order. Rows are sparse; once the stored rows pass
//! 50% density the engine switches to dense storage. [`Echelon::into_rref`]
//! back-substitutes to the unique reduced row echelon form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::field::Field;
use super::SparseVec;

const DENSE_SWITCH_MIN_ROWS: usize = 32;

enum Store<F: Field> {
    Sparse(Vec<SparseVec<F>>),
    Dense(Vec<Vec<F::Elem>>),
}

/// Incremental echelon basis of a subspace of `F^ncols`.
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    store: Store<F>,
    /// pivot column of each stored row
    pivots: Vec<usize>,
    /// row index owning each column as pivot
    pivot_row: Vec<Option<usize>>,
    nnz: usize,
    work: Workspace<F>,
}

struct Workspace<F: Field> {
    vals: Vec<F::Elem>,
    live: Vec<bool>,
    touched: Vec<usize>,
}

impl<F: Field> Workspace<F> {
    fn new(field: &F, n: usize) -> Self {
        Workspace {
            vals: vec![field.zero(); n],
            live: vec![false; n],
            touched: Vec::new(),
        }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        let work = Workspace::new(&field, ncols);
        Echelon {
            field,
            ncols,
            store: Store::Sparse(Vec::new()),
            pivots: Vec::new(),
            pivot_row: vec![None; ncols],
            nnz: 0,
            work,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    /// Normal form of `v` modulo the stored span: zero at every pivot column.
    pub fn reduce(&mut self, v: &SparseVec<F>) -> SparseVec<F> {
        match &self.store {
            Store::Sparse(_) => self.reduce_sparse(v),
            Store::Dense(_) => self.reduce_dense(v),
        }
    }

    fn reduce_sparse(&mut self, v: &SparseVec<F>) -> SparseVec<F> {
        let Store::Sparse(rows) = &self.store else {
            unreachable!()
        };
        let f = &self.field;
        let w = &mut self.work;
        let mut heap = BinaryHeap::new();
        for (c, x) in v {
            w.vals[*c] = x.clone();
            w.live[*c] = true;
            w.touched.push(*c);
            heap.push(Reverse(*c));
        }
        while let Some(Reverse(c)) = heap.pop() {
            if f.is_zero(&w.vals[c]) {
                continue;
            }
            let Some(r) = self.pivot_row[c] else {
                continue;
            };
            let coef = w.vals[c].clone();
            for (cc, x) in &rows[r] {
                w.vals[*cc] = f.sub_mul(&w.vals[*cc], &coef, x);
                if !w.live[*cc] {
                    w.live[*cc] = true;
                    w.touched.push(*cc);
                    heap.push(Reverse(*cc));
                }
            }
        }
        drain(f, w)
    }

    fn reduce_dense(&mut self, v: &SparseVec<F>) -> SparseVec<F> {
        let Store::Dense(rows) = &self.store else {
            unreachable!()
        };
        let f = &self.field;
        let mut acc = vec![f.zero(); self.ncols];
        for (c, x) in v {
            acc[*c] = x.clone();
        }
        // rows are kept sorted by pivot in dense mode
        for (row, &p) in rows.iter().zip(&self.pivots) {
            if f.is_zero(&acc[p]) {
                continue;
            }
            let coef = acc[p].clone();
            for c in p..self.ncols {
                if !f.is_zero(&row[c]) {
                    acc[c] = f.sub_mul(&acc[c], &coef, &row[c]);
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, x)| !f.is_zero(x))
            .collect()
    }

    /// Adds `v` to the basis if it is independent. Returns the new pivot.
    pub fn insert(&mut self, v: &SparseVec<F>) -> Option<usize> {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    /// Inserts a vector already in normal form.
    fn insert_reduced(&mut self, mut r: SparseVec<F>) -> Option<usize> {
        if r.is_empty() {
            return None;
        }
        let f = &self.field;
        let lead = r[0].0;
        let inv = f.inv(&r[0].1).expect("nonzero leading entry");
        for (_, x) in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.nnz += r.len();
        match &mut self.store {
            Store::Sparse(rows) => {
                self.pivot_row[lead] = Some(rows.len());
                rows.push(r);
                self.pivots.push(lead);
                let n = rows.len();
                if n >= DENSE_SWITCH_MIN_ROWS && 2 * self.nnz > n * self.ncols {
                    self.densify();
                }
            }
            Store::Dense(rows) => {
                let mut dense = vec![f.zero(); self.ncols];
                for (c, x) in r {
                    dense[c] = x;
                }
                let pos = self.pivots.partition_point(|&p| p < lead);
                rows.insert(pos, dense);
                self.pivots.insert(pos, lead);
                for (i, &p) in self.pivots.iter().enumerate().skip(pos) {
                    self.pivot_row[p] = Some(i);
                }
            }
        }
        Some(lead)
    }

    fn densify(&mut self) {
        let Store::Sparse(rows) = std::mem::replace(&mut self.store, Store::Dense(Vec::new()))
        else {
            return;
        };
        let f = &self.field;
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut dense_rows = Vec::with_capacity(rows.len());
        let mut pivots = Vec::with_capacity(rows.len());
        for &i in &order {
            let mut d = vec![f.zero(); self.ncols];
            for (c, x) in &rows[i] {
                d[*c] = x.clone();
            }
            dense_rows.push(d);
            pivots.push(self.pivots[i]);
        }
        for (i, &p) in pivots.iter().enumerate() {
            self.pivot_row[p] = Some(i);
        }
        self.pivots = pivots;
        self.store = Store::Dense(dense_rows);
    }

    /// True if `v` lies in the span.
    pub fn contains(&mut self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Back-substitutes to the reduced row echelon form.
    pub fn into_rref(mut self) -> Rref<F> {
        let f = self.field.clone();
        let ncols = self.ncols;
        let (mut pivots, mut rows): (Vec<usize>, Vec<SparseVec<F>>) = match std::mem::replace(
            &mut self.store,
            Store::Sparse(Vec::new()),
        ) {
            Store::Sparse(rows) => {
                let mut pairs: Vec<(usize, SparseVec<F>)> =
                    self.pivots.iter().copied().zip(rows).collect();
                pairs.sort_by_key(|(p, _)| *p);
                pairs.into_iter().unzip()
            }
            Store::Dense(rows) => {
                let sparse = rows
                    .into_iter()
                    .map(|d| {
                        d.into_iter()
                            .enumerate()
                            .filter(|(_, x)| !f.is_zero(x))
                            .collect()
                    })
                    .collect();
                (self.pivots.clone(), sparse)
            }
        };
        // rows are sorted by pivot; reduce from the bottom up
        let mut done = Echelon::new(f.clone(), ncols);
        let n = rows.len();
        let mut reduced: Vec<SparseVec<F>> = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let row = std::mem::take(&mut rows[i]);
            let tail: SparseVec<F> = row[1..].to_vec();
            let mut red = done.reduce_sparse(&tail);
            let mut full = Vec::with_capacity(red.len() + 1);
            full.push((pivots[i], f.one()));
            full.append(&mut red);
            done.push_sparse_row(full.clone());
            reduced[i] = full;
        }
        rows = reduced;
        pivots.shrink_to_fit();
        Rref {
            field: f,
            ncols,
            pivots,
            rows,
        }
    }

    fn push_sparse_row(&mut self, row: SparseVec<F>) {
        if let Store::Sparse(rows) = &mut self.store {
            let lead = row[0].0;
            self.pivot_row[lead] = Some(rows.len());
            self.pivots.push(lead);
            rows.push(row);
        }
    }
}

fn drain<F: Field>(f: &F, w: &mut Workspace<F>) -> SparseVec<F> {
    w.touched.sort_unstable();
    let mut out = Vec::new();
    for &c in &w.touched {
        w.live[c] = false;
        let x = std::mem::replace(&mut w.vals[c], f.zero());
        if !f.is_zero(&x) {
            out.push((c, x));
        }
    }
    w.touched.clear();
    out
}

/// Reduced row echelon form: rows sorted by pivot, each row has a one at its
/// pivot and zeros at every other pivot column.
#[derive(Debug, Clone)]
pub struct Rref<F: Field> {
    pub field: F,
    pub ncols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseVec<F>>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Null space of the row space: one vector per free column `f`, equal to
    /// `e_f - sum_r rows[r][f] e_{pivot(r)}`, in free-column order.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F>> {
        let f = &self.field;
        let free = self.free_columns();
        let mut index = vec![usize::MAX; self.ncols];
        for (i, &c) in free.iter().enumerate() {
            index[c] = i;
        }
        let mut ker: Vec<SparseVec<F>> = free.iter().map(|&c| vec![(c, f.one())]).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            for (c, x) in row.iter().skip(1) {
                ker[index[*c]].push((p, f.neg(x)));
            }
        }
        for v in ker.iter_mut() {
            v.sort_unstable_by_key(|(c, _)| *c);
        }
        ker
    }
}
