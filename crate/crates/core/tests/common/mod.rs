//! Brute-force reference computations for monomial algebras over F_p.
//!
//! Nothing here touches the library's linear algebra: standard monomials are
//! enumerated directly, modules are dense subspaces of `R^b`, and every rank
//! or kernel comes from plain Gaussian elimination on `u64` rows.

#![allow(dead_code)]

use std::collections::HashMap;

use syzygy_core::algebra::Presentation;

pub const P: u64 = 101;

/// Exponent vectors of the relations of a monomial presentation.
pub fn monomial_generators(p: &Presentation) -> Vec<Vec<u32>> {
    p.relations
        .iter()
        .map(|r| {
            let terms: Vec<_> = r.terms().collect();
            assert_eq!(terms.len(), 1, "oracle handles monomial ideals only");
            terms[0].0.clone()
        })
        .collect()
}

pub struct MonomialRing {
    pub nvars: usize,
    pub basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialRing {
    pub fn new(nvars: usize, gens: &[Vec<u32>]) -> Self {
        let divides = |g: &Vec<u32>, m: &Vec<u32>| g.iter().zip(m).all(|(a, b)| a <= b);
        // every variable has a pure power among the generators
        let caps: Vec<u32> = (0..nvars)
            .map(|i| {
                gens.iter()
                    .filter(|g| g.iter().enumerate().all(|(j, &d)| j == i || d == 0))
                    .map(|g| g[i])
                    .min()
                    .expect("Artinian")
            })
            .collect();
        let mut basis = Vec::new();
        let mut e = vec![0u32; nvars];
        'outer: loop {
            if !gens.iter().any(|g| divides(g, &e)) {
                basis.push(e.clone());
            }
            for i in 0..nvars {
                e[i] += 1;
                if e[i] < caps[i] {
                    continue 'outer;
                }
                e[i] = 0;
            }
            break;
        }
        basis.sort_by_key(|m| m.iter().sum::<u32>());
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonomialRing { nvars, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn times_var(&self, i: usize, t: usize) -> Option<usize> {
        let mut m = self.basis[t].clone();
        m[i] += 1;
        self.index.get(&m).copied()
    }

    /// `x_i * v` for `v` in `R^b`.
    pub fn act(&self, i: usize, v: &[u64]) -> Vec<u64> {
        let d = self.dim();
        let mut out = vec![0; v.len()];
        for (k, &c) in v.iter().enumerate() {
            if c != 0 {
                if let Some(s) = self.times_var(i, k % d) {
                    out[(k / d) * d + s] = c;
                }
            }
        }
        out
    }

    /// `t * v` for a basis monomial `t`.
    pub fn act_monomial(&self, t: usize, v: &[u64]) -> Vec<u64> {
        let mut out = v.to_vec();
        for (i, &d) in self.basis[t].iter().enumerate() {
            for _ in 0..d {
                out = self.act(i, &out);
            }
        }
        out
    }
}

fn inv(a: u64) -> u64 {
    let mut r = 1;
    let mut b = a % P;
    let mut e = P - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Row echelon form with pivot columns; rows are reduced in place.
#[derive(Clone, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut [u64]) {
        for (p, r) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
    }

    /// Adds `v` if independent; returns whether it was.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(v[p]);
        for x in v.iter_mut() {
            *x = *x * s % P;
        }
        for (_, r) in self.rows.iter_mut() {
            let c = r[p];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(&v) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
}

pub fn rank(vectors: &[Vec<u64>]) -> usize {
    let mut e = Echelon::default();
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Basis of `{c : sum c_k cols[k] = 0}`.
pub fn kernel(cols: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = cols.len();
    // reduce the augmented vectors [col | e_k]; zero left halves give kernel rows
    let m = cols.first().map_or(0, Vec::len);
    let mut e = Echelon::default();
    let mut out = Vec::new();
    for (k, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        v.resize(m + n, 0);
        v[m + k] = 1;
        e.reduce(&mut v);
        if v[..m].iter().all(|&x| x == 0) {
            out.push(v[m..].to_vec());
            continue;
        }
        e.insert(v);
    }
    out
}

/// A submodule of `R^b`, stored as a basis of dense vectors.
pub struct Sub {
    pub rank: usize,
    pub basis: Vec<Vec<u64>>,
}

pub struct Oracle {
    pub ring: MonomialRing,
}

impl Oracle {
    pub fn new(p: &Presentation) -> Self {
        Oracle {
            ring: MonomialRing::new(p.nvars(), &monomial_generators(p)),
        }
    }

    fn radical(&self, s: &Sub) -> Echelon {
        let mut e = Echelon::default();
        for v in &s.basis {
            for i in 0..self.ring.nvars {
                e.insert(self.ring.act(i, v));
            }
        }
        e
    }

    /// `syz_1(k), ..., syz_n(k)` and `β_0(k), ..., β_n(k)`.
    pub fn syzygies_of_k(&self, n: usize) -> (Vec<Sub>, Vec<usize>) {
        let d = self.ring.dim();
        let m = Sub {
            rank: 1,
            basis: (1..d)
                .map(|i| {
                    let mut v = vec![0; d];
                    v[i] = 1;
                    v
                })
                .collect(),
        };
        let mut betti = vec![1];
        let mut syz = vec![m];
        while betti.len() <= n {
            let s = syz.last().unwrap();
            let mut rad = self.radical(s);
            let gens: Vec<Vec<u64>> = s
                .basis
                .iter()
                .filter(|v| rad.insert((*v).clone()))
                .cloned()
                .collect();
            betti.push(gens.len());
            if betti.len() > n {
                break;
            }
            let cols: Vec<Vec<u64>> = gens
                .iter()
                .flat_map(|g| (0..d).map(move |t| self.ring.act_monomial(t, g)))
                .collect();
            let ker = kernel(&cols);
            syz.push(Sub {
                rank: gens.len(),
                basis: ker,
            });
        }
        (syz, betti)
    }

    /// Whether `k` is a direct summand of `s`: some socle element lies
    /// outside `m s`.
    pub fn has_simple_summand(&self, s: &Sub) -> bool {
        let rad = self.radical(s);
        // socle: combinations of the basis killed by every variable
        let cols: Vec<Vec<u64>> = s
            .basis
            .iter()
            .map(|v| {
                (0..self.ring.nvars)
                    .flat_map(|i| self.ring.act(i, v))
                    .collect()
            })
            .collect();
        kernel(&cols).iter().any(|c| {
            let mut v = vec![0; s.basis[0].len()];
            for (k, &x) in c.iter().enumerate() {
                if x != 0 {
                    for (a, b) in v.iter_mut().zip(&s.basis[k]) {
                        *a = (*a + x * b) % P;
                    }
                }
            }
            !rad.contains(&v)
        })
    }

    /// `h_0(R), ..., h_e(R)` from the Koszul complex on the variables.
    pub fn koszul_ring(&self) -> Vec<usize> {
        let e = self.ring.nvars;
        let d = self.ring.dim();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=e)
            .map(|k| {
                (0u32..1 << e)
                    .filter(|m| m.count_ones() as usize == k)
                    .map(|m| (0..e).filter(|i| m >> i & 1 == 1).collect())
                    .collect()
            })
            .collect();
        let rank_of = |i: usize| -> usize {
            if i == 0 || i > e {
                return 0;
            }
            let target: HashMap<&Vec<usize>, usize> =
                subsets[i - 1].iter().enumerate().map(|(k, s)| (s, k)).collect();
            let mut cols = Vec::new();
            for s in &subsets[i] {
                for t in 0..d {
                    let mut col = vec![0u64; subsets[i - 1].len() * d];
                    for (pos, &v) in s.iter().enumerate() {
                        if let Some(u) = self.ring.times_var(v, t) {
                            let rest: Vec<usize> = s.iter().copied().filter(|&w| w != v).collect();
                            let sign = if pos % 2 == 0 { 1 } else { P - 1 };
                            col[target[&rest] * d + u] = sign;
                        }
                    }
                    cols.push(col);
                }
            }
            rank(&cols)
        };
        (0..=e)
            .map(|i| subsets[i].len() * d - rank_of(i) - rank_of(i + 1))
            .collect()
    }
}
