//! Dense matrices and univariate polynomials used by the randomized
//! decomposition. Endomorphisms of syzygies are rarely sparse, so powers and
//! ranks are cheaper in row-major form.

use rand::Rng;

use crate::arith::{ExactMatrix, Field, SparseVec};

#[derive(Clone, Debug)]
pub(crate) struct Dense<F: Field> {
    f: F,
    rows: usize,
    cols: usize,
    a: Vec<F::Elem>,
}

impl<F: Field> Dense<F> {
    pub fn zeros(f: &F, rows: usize, cols: usize) -> Self {
        Dense {
            f: f.clone(),
            rows,
            cols,
            a: vec![f.zero(); rows * cols],
        }
    }

    #[cfg(test)]
    pub fn identity(f: &F, n: usize) -> Self {
        let mut d = Self::zeros(f, n, n);
        for i in 0..n {
            d.a[i * n + i] = f.one();
        }
        d
    }

    pub fn from_exact(m: &ExactMatrix<F>) -> Self {
        let mut d = Self::zeros(m.field(), m.rows(), m.cols());
        for (j, col) in m.columns().iter().enumerate() {
            for (i, x) in col {
                d.a[i * d.cols + j] = x.clone();
            }
        }
        d
    }

    #[cfg(test)]
    pub fn to_exact(&self) -> ExactMatrix<F> {
        ExactMatrix::from_columns(self.f.clone(), self.rows, self.columns())
    }

    pub fn columns(&self) -> Vec<SparseVec<F>> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter(|&i| !self.f.is_zero(&self.a[i * self.cols + j]))
                    .map(|i| (i, self.a[i * self.cols + j].clone()))
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let f = &self.f;
        let mut out = Self::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            let row = &mut out.a[i * o.cols..(i + 1) * o.cols];
            for k in 0..self.cols {
                let x = &self.a[i * self.cols + k];
                if f.is_zero(x) {
                    continue;
                }
                let orow = &o.a[k * o.cols..(k + 1) * o.cols];
                for (r, y) in row.iter_mut().zip(orow) {
                    if !f.is_zero(y) {
                        *r = f.add(r, &f.mul(x, y));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.f;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (x, y) in self.a[i * self.cols..(i + 1) * self.cols].iter().zip(v) {
                    if !f.is_zero(x) && !f.is_zero(y) {
                        acc = f.add(&acc, &f.mul(x, y));
                    }
                }
                acc
            })
            .collect()
    }

    /// `self - lambda * I`.
    pub fn shift(&self, lambda: &F::Elem) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let k = i * self.cols + i;
            out.a[k] = self.f.sub(&out.a[k], lambda);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| self.f.is_zero(x))
    }

    pub fn rank(&self) -> usize {
        let f = &self.f;
        let mut a = self.a.clone();
        let (n, m) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..m {
            let Some(p) = (rank..n).find(|&r| !f.is_zero(&a[r * m + c])) else {
                continue;
            };
            if p != rank {
                for j in 0..m {
                    a.swap(p * m + j, rank * m + j);
                }
            }
            let inv = f.inv(&a[rank * m + c]).expect("nonzero pivot");
            for r in rank + 1..n {
                let x = a[r * m + c].clone();
                if f.is_zero(&x) {
                    continue;
                }
                let t = f.mul(&x, &inv);
                for j in c..m {
                    let y = a[rank * m + j].clone();
                    if !f.is_zero(&y) {
                        a[r * m + j] = f.sub_mul(&a[r * m + j], &t, &y);
                    }
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    /// `self^(2^k)` with `2^k >= rows`: the stable power of the Fitting lemma.
    pub fn stable_power(&self) -> Self {
        let mut g = self.clone();
        let mut k = 1;
        while k < self.rows {
            g = g.mul(&g);
            if g.is_zero() {
                break;
            }
            k *= 2;
        }
        g
    }

    /// Monic minimal polynomial of `self` on `v`, low degree first.
    pub fn min_poly_on(&self, v: Vec<F::Elem>) -> Vec<F::Elem> {
        let f = &self.f;
        let n = self.rows;
        // reduced Krylov vectors with pivot and their expression in f^i v
        let mut basis: Vec<(usize, Vec<F::Elem>, Vec<F::Elem>)> = Vec::new();
        let mut w = v;
        for k in 0..=n {
            let mut red = w.clone();
            let mut comb = vec![f.zero(); k + 1];
            comb[k] = f.one();
            for (p, bv, bc) in &basis {
                let x = red[*p].clone();
                if f.is_zero(&x) {
                    continue;
                }
                for (r, y) in red.iter_mut().zip(bv) {
                    *r = f.sub_mul(r, &x, y);
                }
                for (r, y) in comb.iter_mut().zip(bc) {
                    *r = f.sub_mul(r, &x, y);
                }
            }
            match red.iter().position(|x| !f.is_zero(x)) {
                None => return comb,
                Some(p) => {
                    let inv = f.inv(&red[p]).unwrap();
                    let bv = red.iter().map(|x| f.mul(x, &inv)).collect();
                    let bc = comb.iter().map(|x| f.mul(x, &inv)).collect();
                    basis.push((p, bv, bc));
                }
            }
            w = self.mul_vec(&w);
        }
        unreachable!("Krylov sequence longer than the dimension")
    }
}

fn trim<F: Field>(f: &F, a: &mut Vec<F::Elem>) {
    while a.last().is_some_and(|x| f.is_zero(x)) {
        a.pop();
    }
}

fn rem<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    let mut r = a.to_vec();
    trim(f, &mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(&m[dm]).expect("nonzero modulus");
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(&r[top], &lead_inv);
        for (i, y) in m.iter().enumerate() {
            let k = top - dm + i;
            r[k] = f.sub_mul(&r[k], &c, y);
        }
        trim(f, &mut r);
    }
    r
}

fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    rem(f, &out, m)
}

fn powmod<F: Field>(f: &F, base: &[F::Elem], mut e: u64, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    acc
}

fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        let inv = f.inv(&l).unwrap();
        for c in x.iter_mut() {
            *c = f.mul(c, &inv);
        }
    }
    x
}

/// A root in `F_p` of the monic polynomial `mu`, if any.
pub(crate) fn find_root<F: Field, R: Rng>(
    f: &F,
    p: u64,
    mu: &[F::Elem],
    rng: &mut R,
) -> Option<F::Elem> {
    if p == 2 {
        return [f.zero(), f.one()].into_iter().find(|x| f.is_zero(&eval(f, mu, x)));
    }
    let x = vec![f.zero(), f.one()];
    // product of the distinct linear factors: gcd(mu, x^p - x)
    let mut xp = powmod(f, &x, p, mu);
    if xp.len() < 2 {
        xp.resize(2, f.zero());
    }
    xp[1] = f.sub(&xp[1], &f.one());
    let mut h = gcd(f, mu, &xp);
    if h.len() < 2 {
        return None;
    }
    // equal-degree splitting into linear factors
    while h.len() > 2 {
        let a = f.random(rng);
        let shifted = vec![a, f.one()];
        let mut s = powmod(f, &shifted, (p - 1) / 2, &h);
        if s.is_empty() {
            s.push(f.zero());
        }
        s[0] = f.sub(&s[0], &f.one());
        let g = gcd(f, &h, &s);
        if g.len() > 1 && g.len() < h.len() {
            h = g;
        }
    }
    Some(f.neg(&h[0]))
}

fn eval<F: Field>(f: &F, poly: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = f.zero();
    for c in poly.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}
