use serde::{Deserialize, Serialize};

use super::resolution::{resolve, syzygy_step, FreeResolution};
use super::{free_module, sub_degree, ActionModule, ModuleError};
use crate::algebra::Degree;
use crate::arith::{
    kernel_of_columns, rank_of_columns, Echelon, ExactMatrix, Field, SparseVec, Subspace,
};
use crate::report::{all_hold, Check};

fn normalize_columns<F: Field>(f: &F, rows: usize, cols: Vec<SparseVec<F>>) -> Vec<SparseVec<F>> {
    ExactMatrix::from_columns(f.clone(), rows, cols).into_columns()
}

/// `Hom_R(M, N)` as a module, realized inside `N^b` (`b` = number of
/// minimal generators of `M`) as the tuples killed by the relations.
#[derive(Debug, Clone)]
pub struct HomModule<F: Field> {
    pub module: ActionModule<F>,
    /// Kernel inside `N^b`; entry `j * dim N + t` is coordinate `t` of the
    /// image of generator `j`.
    pub kernel: Subspace<F>,
    source_dim: usize,
    target: ActionModule<F>,
    /// Preimage in `R^b` of each basis vector of `M`.
    section: Vec<SparseVec<F>>,
}

impl<F: Field> HomModule<F> {
    /// Matrix (`dim N x dim M`) of the map with the given Hom coordinates.
    pub fn to_matrix(&self, coords: &SparseVec<F>) -> ExactMatrix<F> {
        let f = self.target.field();
        let dn = self.target.dim();
        let dr = self.target.algebra().dim();
        let mut tuple = crate::arith::Accumulator::new(f, self.kernel.ambient());
        for (k, c) in coords {
            tuple.axpy(f, c, &self.kernel.basis()[*k]);
        }
        let tuple = tuple.drain(f);
        let b = if dn == 0 { 0 } else { self.kernel.ambient() / dn };
        let mut images: Vec<SparseVec<F>> = vec![Vec::new(); b];
        for (i, x) in tuple {
            images[i / dn].push((i % dn, x));
        }
        let ma = self.target.monomial_actions();
        let cols = self
            .section
            .iter()
            .map(|pre| {
                let mut acc = crate::arith::Accumulator::new(f, dn);
                for (idx, c) in pre {
                    let (j, r) = (idx / dr, idx % dr);
                    if !images[j].is_empty() {
                        acc.axpy(f, c, &ma[r].mul_vec(&images[j]));
                    }
                }
                acc.drain(f)
            })
            .collect();
        ExactMatrix::from_columns(f.clone(), dn, cols)
    }

    /// Matrices of the basis of `Hom(M, N)`.
    pub fn basis_matrices(&self) -> Vec<ExactMatrix<F>> {
        let one = self.target.field().one();
        (0..self.kernel.dim())
            .map(|k| self.to_matrix(&vec![(k, one.clone())]))
            .collect()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }
}

/// Preimages of the basis of `M` under the cover `R^b -> M` on its minimal
/// generators.
fn cover_section<F: Field>(m: &ActionModule<F>) -> Vec<SparseVec<F>> {
    let f = m.field();
    let dm = m.dim();
    let dr = m.algebra().dim();
    let gens = m.generator_indices();
    let mut e = Echelon::new(f.clone(), dm + gens.len() * dr);
    for (j, &g) in gens.iter().enumerate() {
        for (r, img) in m.orbit(&vec![(g, f.one())]).into_iter().enumerate() {
            let mut v = img;
            v.push((dm + j * dr + r, f.one()));
            e.insert(&v);
        }
    }
    let rref = e.into_rref();
    let mut section = vec![Vec::new(); dm];
    for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
        if p < dm {
            section[p] = row
                .iter()
                .filter(|(c, _)| *c >= dm)
                .map(|(c, x)| (c - dm, x.clone()))
                .collect();
        }
    }
    section
}

/// `Hom_R(M, N)` via a presentation of `M`.
pub fn hom_module<F: Field>(
    m: &ActionModule<F>,
    n: &ActionModule<F>,
) -> Result<HomModule<F>, ModuleError> {
    m.same_algebra(n)?;
    let alg = m.algebra().clone();
    let f = alg.field().clone();
    let dn = n.dim();
    let dr = alg.dim();
    let gens = m.generator_indices().to_vec();
    let b = gens.len();
    let step = syzygy_step(m, "");
    let rel_gens = step.syzygy.generator_indices().to_vec();
    let relations: Vec<&SparseVec<F>> = rel_gens.iter().map(|&g| &step.kernel.basis()[g]).collect();
    let ma = n.monomial_actions();
    let mut cols: Vec<SparseVec<F>> = vec![Vec::new(); b * dn];
    for (q, rel) in relations.iter().enumerate() {
        for (idx, c) in rel.iter() {
            let (j, r) = (idx / dr, idx % dr);
            for t in 0..dn {
                for (t2, x) in ma[r].column(t) {
                    cols[j * dn + t].push((q * dn + t2, f.mul(c, x)));
                }
            }
        }
    }
    let nrows = relations.len() * dn;
    let cols = normalize_columns(&f, nrows, cols);
    let grading = match (n.degrees(), &step.generator_degrees, step.syzygy.degrees()) {
        (Some(nd), Some(gd), Some(sd)) => {
            let col_keys: Vec<Degree> = gd
                .iter()
                .flat_map(|g| nd.iter().map(move |d| sub_degree(d, g)))
                .collect();
            let row_keys: Vec<Degree> = rel_gens
                .iter()
                .flat_map(|&q| nd.iter().map(move |d| sub_degree(d, &sd[q])))
                .collect();
            Some((row_keys, col_keys))
        }
        _ => None,
    };
    let kernel = match &grading {
        Some((rk, ck)) => kernel_of_columns(&f, nrows, &cols, Some((&rk[..], &ck[..]))),
        None => kernel_of_columns::<F, Degree>(&f, nrows, &cols, None),
    };
    // N^b with degrees shifted by the generator degrees
    let copies: Vec<&ActionModule<F>> = vec![n; b];
    let mut big = super::direct_sum_or_zero(&alg, &copies);
    if let Some((_, ck)) = grading {
        big.degrees = Some(ck);
    } else {
        big.degrees = None;
    }
    let module = big.restrict(&kernel, format!("Hom({}, {})", m.label(), n.label()));
    Ok(HomModule {
        module,
        kernel,
        source_dim: m.dim(),
        target: n.clone(),
        section: cover_section(m),
    })
}

/// Basis of `Hom_R(M, N)` as `dim N x dim M` matrices.
pub fn hom_matrices<F: Field>(
    m: &ActionModule<F>,
    n: &ActionModule<F>,
) -> Result<Vec<ExactMatrix<F>>, ModuleError> {
    Ok(hom_module(m, n)?.basis_matrices())
}

/// Columns of `Hom(d, N): N^{beta_i} -> N^{beta_{i+1}}` for the differential
/// `d = d_{i+1}`, with grading keys when available.
fn hom_differential<F: Field>(
    res: &FreeResolution<F>,
    i: usize,
    n: &ActionModule<F>,
) -> (usize, Vec<SparseVec<F>>, Option<Vec<Degree>>) {
    let f = n.field();
    let dn = n.dim();
    let d = &res.differentials[i];
    let dr = d.algebra_dim;
    let ma = n.monomial_actions();
    let mut cols: Vec<SparseVec<F>> = vec![Vec::new(); res.betti[i] * dn];
    for (c, col) in d.columns.iter().enumerate() {
        for (idx, a) in col {
            let (j, r) = (idx / dr, idx % dr);
            for t in 0..dn {
                for (t2, x) in ma[r].column(t) {
                    cols[j * dn + t].push((c * dn + t2, f.mul(a, x)));
                }
            }
        }
    }
    let nrows = res.betti[i + 1] * dn;
    let keys = match (n.degrees(), &res.generator_degrees[i]) {
        (Some(nd), Some(gd)) => Some(
            gd.iter()
                .flat_map(|g| nd.iter().map(move |t| sub_degree(t, g)))
                .collect(),
        ),
        _ => None,
    };
    (nrows, normalize_columns(f, nrows, cols), keys)
}

/// Columns of `d_i (x) N: N^{beta_i} -> N^{beta_{i-1}}` for `i >= 1`.
fn tensor_differential<F: Field>(
    res: &FreeResolution<F>,
    i: usize,
    n: &ActionModule<F>,
) -> (usize, Vec<SparseVec<F>>, Option<Vec<Degree>>) {
    let f = n.field();
    let dn = n.dim();
    let d = &res.differentials[i - 1];
    let dr = d.algebra_dim;
    let ma = n.monomial_actions();
    let mut cols: Vec<SparseVec<F>> = Vec::with_capacity(res.betti[i] * dn);
    for col in &d.columns {
        for t in 0..dn {
            let mut out = Vec::new();
            for (idx, a) in col {
                let (j, r) = (idx / dr, idx % dr);
                for (t2, x) in ma[r].column(t) {
                    out.push((j * dn + t2, f.mul(a, x)));
                }
            }
            cols.push(out);
        }
    }
    let nrows = res.betti[i - 1] * dn;
    let keys = match (n.degrees(), &res.generator_degrees[i]) {
        (Some(nd), Some(gd)) => Some(
            gd.iter()
                .flat_map(|g| nd.iter().map(move |t| super::add_degree(t, g)))
                .collect(),
        ),
        _ => None,
    };
    (nrows, normalize_columns(f, nrows, cols), keys)
}

fn rank_of<F: Field>(
    f: &F,
    (nrows, cols, keys): (usize, Vec<SparseVec<F>>, Option<Vec<Degree>>),
) -> usize {
    rank_of_columns(f, nrows, &cols, keys.as_deref())
}

/// `dim Ext^i(M, N)` for `0 <= i <= n` from a resolution of length `n + 1`.
pub fn ext_dims_from<F: Field>(res: &FreeResolution<F>, n_mod: &ActionModule<F>, n: usize) -> Vec<usize> {
    assert!(res.length() > n, "resolution too short for Ext^{n}");
    let f = n_mod.field();
    let dn = n_mod.dim();
    let ranks: Vec<usize> = (0..=n).map(|i| rank_of(f, hom_differential(res, i, n_mod))).collect();
    (0..=n)
        .map(|i| res.betti[i] * dn - ranks[i] - if i > 0 { ranks[i - 1] } else { 0 })
        .collect()
}

/// `dim Tor_i(M, N)` for `0 <= i <= n` from a resolution of length `n + 1`.
pub fn tor_dims_from<F: Field>(res: &FreeResolution<F>, n_mod: &ActionModule<F>, n: usize) -> Vec<usize> {
    assert!(res.length() > n, "resolution too short for Tor_{n}");
    let f = n_mod.field();
    let dn = n_mod.dim();
    // ranks[i] = rank of d_i (x) N, with d_0 = 0
    let mut ranks = vec![0usize; n + 2];
    for (i, r) in ranks.iter_mut().enumerate().skip(1) {
        *r = rank_of(f, tensor_differential(res, i, n_mod));
    }
    (0..=n)
        .map(|i| res.betti[i] * dn - ranks[i] - ranks[i + 1])
        .collect()
}

/// `dim Ext^i_R(M, N)` for `0 <= i <= n`.
pub fn ext_dims<F: Field>(
    m: &ActionModule<F>,
    n_mod: &ActionModule<F>,
    n: usize,
) -> Result<Vec<usize>, ModuleError> {
    m.same_algebra(n_mod)?;
    Ok(ext_dims_from(&resolve(m, n + 1), n_mod, n))
}

/// `dim Tor_i^R(M, N)` for `0 <= i <= n`.
pub fn tor_dims<F: Field>(
    m: &ActionModule<F>,
    n_mod: &ActionModule<F>,
    n: usize,
) -> Result<Vec<usize>, ModuleError> {
    m.same_algebra(n_mod)?;
    Ok(tor_dims_from(&resolve(m, n + 1), n_mod, n))
}

/// `K_R = Hom_k(R, k)` with the contragredient action.
pub fn canonical_module<F: Field>(
    a: &std::sync::Arc<crate::algebra::FiniteLocalAlgebra<F>>,
) -> ActionModule<F> {
    let action = a.actions().iter().map(ExactMatrix::transpose).collect();
    let degrees = a
        .degrees()
        .map(|d| d.iter().map(|x| x.iter().map(|v| -v).collect()).collect());
    ActionModule::from_parts(a.clone(), a.dim(), action, degrees, "K_R")
}

/// Outcome of the dual-resolution checks for a module `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSequenceReport {
    pub label: String,
    pub algebra_hash: String,
    pub n: usize,
    /// `dim Ext^i(N, R)` for `0 <= i <= n`.
    pub ext: Vec<usize>,
    /// Least `i > 0` with `Ext^i(N, R) != 0`, when the hypothesis fails.
    pub first_nonvanishing_ext: Option<usize>,
    pub betti: Vec<usize>,
    /// Betti numbers of `Hom(syz_{n+1} N, R)`.
    pub dual_betti: Vec<usize>,
    /// Betti numbers of `Hom(N, R)`.
    pub alpha: Vec<usize>,
    pub alpha0_prime: usize,
    pub beta0_prime: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Splices the dual of a minimal resolution of `N` with a resolution of
/// `Hom(N, R)` and checks the resulting Betti-number relations, provided
/// `Ext^i(N, R) = 0` for `0 < i <= n`.
pub fn dual_sequence_check<F: Field>(
    module: &ActionModule<F>,
    n: usize,
) -> Result<DualSequenceReport, ModuleError> {
    const EXTRA: usize = 2;
    let alg = module.algebra().clone();
    let r = free_module(&alg, 1);
    let res = resolve(module, n + 1);
    let ext = ext_dims_from(&res, &r, n);
    let first_nonvanishing_ext = (1..=n).find(|&i| ext[i] != 0);
    let mut report = DualSequenceReport {
        label: module.label().to_string(),
        algebra_hash: alg.hash().to_string(),
        n,
        ext: ext.clone(),
        first_nonvanishing_ext,
        betti: res.betti.clone(),
        dual_betti: Vec::new(),
        alpha: Vec::new(),
        alpha0_prime: 0,
        beta0_prime: 0,
        checks: Vec::new(),
        passed: false,
    };
    if first_nonvanishing_ext.is_some() {
        return Ok(report);
    }
    let mut checks = vec![Check::new("dual differentials have entries in m", res.is_minimal())];
    let hom_nr = hom_module(module, &r)?;
    checks.push(Check::with_detail(
        "Hom(N,R) = ker d^0",
        hom_nr.module.dim() == ext[0],
        format!("{} vs {}", hom_nr.module.dim(), ext[0]),
    ));
    let h = hom_module(res.syzygy(n + 1), &r)?.module;
    let dual_betti = resolve(&h, n + 1 + EXTRA).betti;
    for i in 1..=n {
        checks.push(Check::with_detail(
            format!("beta_{i}(N) = beta_{}(Hom(syz_{} N, R))", n - i, n + 1),
            res.betti[i] == dual_betti[n - i],
            format!("{} vs {}", res.betti[i], dual_betti[n - i]),
        ));
    }
    let alpha = resolve(&hom_nr.module, EXTRA).betti;
    // delta (x) k: unit coefficients of the generators of Hom(N,R) in R^{beta_0}
    let f = alg.field();
    let dr = alg.dim();
    let rows: Vec<SparseVec<F>> = hom_nr
        .module
        .generator_indices()
        .iter()
        .map(|&g| {
            hom_nr.kernel.basis()[g]
                .iter()
                .filter(|(i, _)| i % dr == 0)
                .map(|(i, x)| (i / dr, x.clone()))
                .collect()
        })
        .collect();
    let rho = rank_of_columns::<F, u8>(f, res.betti[0], &rows, None);
    let alpha0_prime = alpha[0] - rho;
    let beta0_prime = res.betti[0] - rho;
    checks.push(Check::new(
        "alpha_0 - alpha_0' = beta_0 - beta_0' >= 0",
        alpha[0] - alpha0_prime == res.betti[0] - beta0_prime,
    ));
    checks.push(Check::with_detail(
        format!("beta_0' >= beta_{n}(Hom(syz_{} N, R))", n + 1),
        beta0_prime >= dual_betti[n],
        format!("{beta0_prime} vs {}", dual_betti[n]),
    ));
    checks.push(Check::with_detail(
        format!("alpha_0' >= beta_{}(Hom(syz_{} N, R))", n + 1, n + 1),
        alpha0_prime >= dual_betti[n + 1],
        format!("{alpha0_prime} vs {}", dual_betti[n + 1]),
    ));
    for i in 1..=EXTRA {
        checks.push(Check::with_detail(
            format!("alpha_{i} >= beta_{}(Hom(syz_{} N, R))", n + i + 1, n + 1),
            alpha[i] >= dual_betti[n + i + 1],
            format!("{} vs {}", alpha[i], dual_betti[n + i + 1]),
        ));
    }
    report.passed = all_hold(&checks);
    report.dual_betti = dual_betti;
    report.alpha = alpha;
    report.alpha0_prime = alpha0_prime;
    report.beta0_prime = beta0_prime;
    report.checks = checks;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::tests::alg_q;
    use crate::modules::{maximal_ideal, residue_field};

    #[test]
    fn hom_examples() {
        let a = alg_q("vars x,y; rels x^2, x*y, y^2;");
        let r = free_module(&a, 1);
        let k = residue_field(&a);
        let m = maximal_ideal(&a);
        assert_eq!(hom_module(&r, &m).unwrap().module.dim(), m.dim());
        assert_eq!(hom_module(&k, &r).unwrap().module.dim(), a.socle().len());
        assert_eq!(hom_module(&k, &k).unwrap().module.dim(), 1);
        let h = hom_module(&m, &m).unwrap();
        assert_eq!(h.module.dim(), 4);
        for mat in h.basis_matrices() {
            assert!(m.is_equivariant(&m, &mat));
        }
        h.module.check().unwrap();
    }

    #[test]
    fn tor_and_ext_examples() {
        let a = alg_q("vars x,y; rels x^2, x*y, y^2;");
        let r = free_module(&a, 1);
        let k = residue_field(&a);
        let m = maximal_ideal(&a);
        assert_eq!(tor_dims(&k, &k, 4).unwrap(), vec![1, 2, 4, 8, 16]);
        assert_eq!(tor_dims(&k, &m, 1).unwrap()[1], 4);
        assert_eq!(tor_dims(&r, &m, 2).unwrap(), vec![2, 0, 0]);
        assert_eq!(ext_dims(&k, &k, 1).unwrap()[1], 2);
        assert_eq!(ext_dims(&k, &r, 0).unwrap()[0], 2);
        assert_eq!(ext_dims(&r, &k, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn canonical_module_examples() {
        let g = alg_q("vars x,y; rels x^2, y^2;");
        let kr = canonical_module(&g);
        kr.check().unwrap();
        assert_eq!(kr.num_generators(), 1);
        let a = alg_q("vars x,y; rels x^2, x*y, y^2;");
        let kr = canonical_module(&a);
        kr.check().unwrap();
        assert_eq!(kr.dim(), 3);
        assert_eq!(kr.num_generators(), 2);
    }

    #[test]
    fn dual_sequence_examples() {
        let g = alg_q("vars x,y; rels x^2, y^2;");
        let rep = dual_sequence_check(&free_module(&g, 1), 3).unwrap();
        assert!(rep.passed, "{rep:?}");
        let rep = dual_sequence_check(&canonical_module(&g), 3).unwrap();
        assert!(rep.passed, "{rep:?}");
        let a = alg_q("vars x,y; rels x^2, x*y, y^2;");
        let rep = dual_sequence_check(&canonical_module(&a), 3).unwrap();
        assert_eq!(rep.first_nonvanishing_ext, Some(1));
        assert!(!rep.passed);
    }
}
