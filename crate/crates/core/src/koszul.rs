//! Koszul homology on a minimal generating set of the maximal ideal.
//!
//! `K_i ⊗ M` has basis `e_S ⊗ v` for `S` an increasing `i`-subset of the
//! Koszul generators. The differential is
//! `e_S ⊗ v ↦ Σ_k (-1)^k e_{S∖s_k} ⊗ x_{s_k} v` with `k` the 0-based
//! position of `s_k` in `S`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Degree, FiniteLocalAlgebra};
use crate::arith::{rank_of_columns, Field, SparseVec};
use crate::modules::{free_module, residue_field, resolve, ActionModule, FreeResolution};
use crate::report::{binomial, Check, FormulaReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("depth of the zero module is undefined")]
    ZeroModule,
}

/// `h_0(M), ..., h_e(M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulProfile {
    pub label: String,
    pub h: Vec<usize>,
}

impl KoszulProfile {
    /// `h_i`, zero outside `0..=e`.
    pub fn get(&self, i: i64) -> usize {
        if i < 0 {
            return 0;
        }
        self.h.get(i as usize).copied().unwrap_or(0)
    }

    /// `h_i` with `h_0` replaced by zero.
    pub fn reduced(&self, i: i64) -> usize {
        if i == 0 {
            0
        } else {
            self.get(i)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.h
            .iter()
            .enumerate()
            .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum()
    }
}

/// Increasing subsets of `0..e` of size `i`, in lexicographic order, as bitmasks.
fn subsets(e: usize, i: usize) -> Vec<u64> {
    fn rec(start: usize, e: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for s in start..=(e - left) {
            rec(s + 1, e, left - 1, cur | (1 << s), out);
        }
    }
    let mut out = Vec::new();
    if i <= e {
        rec(0, e, i, 0, &mut out);
    }
    out
}

/// Rank of `d_i: K_i ⊗ M -> K_{i-1} ⊗ M`, for `1 <= i <= e`.
fn differential_rank<F: Field>(m: &ActionModule<F>, i: usize) -> usize {
    let alg = m.algebra();
    let f = alg.field();
    let vars = alg.koszul_vars();
    let e = vars.len();
    let d = m.dim();
    let src = subsets(e, i);
    let tgt = subsets(e, i - 1);
    let tgt_index: HashMap<u64, usize> = tgt.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let var_degrees: Option<Vec<&Degree>> = alg
        .var_degrees()
        .map(|vd| vars.iter().map(|&v| &vd[v]).collect());
    let mut columns: Vec<SparseVec<F>> = Vec::with_capacity(src.len() * d);
    let mut keys: Vec<Degree> = Vec::new();
    let graded = m.degrees().is_some() && var_degrees.is_some();
    for &s in &src {
        let members: Vec<usize> = (0..e).filter(|&b| s & (1 << b) != 0).collect();
        let shift: Option<Degree> = if graded {
            let vd = var_degrees.as_ref().unwrap();
            let mut acc = vec![0; vd[0].len()];
            for &b in &members {
                for (a, x) in acc.iter_mut().zip(vd[b]) {
                    *a += x;
                }
            }
            Some(acc)
        } else {
            None
        };
        for t in 0..d {
            let mut col: SparseVec<F> = Vec::new();
            for (k, &b) in members.iter().enumerate() {
                let row_block = tgt_index[&(s & !(1 << b))];
                let img = m.actions()[vars[b]].column(t);
                let neg = k % 2 == 1;
                for (r, x) in img {
                    let x = if neg { f.neg(x) } else { x.clone() };
                    col.push((row_block * d + r, x));
                }
            }
            col.sort_by_key(|(r, _)| *r);
            columns.push(col);
            if let Some(sh) = &shift {
                let deg = &m.degrees().unwrap()[t];
                keys.push(sh.iter().zip(deg).map(|(a, b)| a + b).collect());
            }
        }
    }
    let nrows = tgt.len() * d;
    if graded {
        rank_of_columns(f, nrows, &columns, Some(&keys[..]))
    } else {
        rank_of_columns::<F, Degree>(f, nrows, &columns, None)
    }
}

fn compute_profile<F: Field>(m: &ActionModule<F>) -> Vec<usize> {
    let e = m.algebra().embedding_dim();
    let d = m.dim();
    // ranks[i] = rank d_i; d_0 = d_{e+1} = 0
    let mut ranks = vec![0usize; e + 2];
    if d > 0 {
        let inner: Vec<usize> = (1..=e).into_par_iter().map(|i| differential_rank(m, i)).collect();
        ranks[1..=e].copy_from_slice(&inner);
    }
    (0..=e)
        .map(|i| binomial(e as i64, i as i64) * d - ranks[i] - ranks[i + 1])
        .collect()
}

/// Koszul homology dimensions of `M`, memoized on the module.
pub fn koszul_profile<F: Field>(m: &ActionModule<F>) -> KoszulProfile {
    let h = m.koszul_cache().get_or_init(|| compute_profile(m)).clone();
    KoszulProfile {
        label: m.label().to_string(),
        h,
    }
}

/// Profile of the algebra itself.
pub fn ring_profile<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>) -> KoszulProfile {
    koszul_profile(&free_module(a, 1))
}

/// `e - max{i : h_i(M) != 0}`.
pub fn depth_from_koszul<F: Field>(m: &ActionModule<F>) -> Result<usize, KoszulError> {
    let p = koszul_profile(m);
    let top = p.h.iter().rposition(|&x| x != 0).ok_or(KoszulError::ZeroModule)?;
    Ok(p.h.len() - 1 - top)
}

/// `h_1(R) <= 1`: at most one minimal relation.
pub fn is_hypersurface<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>) -> bool {
    ring_profile(a).get(1) <= 1
}

/// `h_0 = β_0`, `h_e = dim socle`, vanishing Euler characteristic when `e >= 1`.
pub fn profile_invariants<F: Field>(m: &ActionModule<F>) -> Vec<Check> {
    let p = koszul_profile(m);
    let e = p.h.len() - 1;
    let mut checks = vec![
        Check::with_detail(
            "h_0 = beta_0",
            p.h[0] == m.num_generators(),
            format!("{} vs {}", p.h[0], m.num_generators()),
        ),
        Check::with_detail(
            "h_e = dim socle",
            p.h[e] == m.socle().len(),
            format!("{} vs {}", p.h[e], m.socle().len()),
        ),
    ];
    if e >= 1 {
        checks.push(Check::with_detail(
            "euler characteristic",
            p.euler_characteristic() == 0,
            p.euler_characteristic().to_string(),
        ));
    }
    checks
}

/// The four inequalities relating the profiles of consecutive syzygies,
/// for `1 <= j <= n`, read off an existing resolution.
pub fn verify_syzygy_profile_bounds_from<F: Field>(res: &mut FreeResolution<F>, n: usize) -> FormulaReport {
    res.extend_to(n);
    let alg = res.module().algebra().clone();
    let e = alg.embedding_dim() as i64;
    let hr = ring_profile(&alg);
    let mut checks = Vec::new();
    for j in 1..=n {
        let cur = koszul_profile(res.syzygy(j));
        let prev = koszul_profile(res.syzygy(j - 1));
        let b_prev = res.betti[j - 1];
        for i in 1..=e {
            let rhs = b_prev * hr.get(i) + prev.get(i + 1);
            checks.push(Check::with_detail(
                format!("(1) n={j} i={i}"),
                cur.get(i) <= rhs,
                format!("{} <= {}", cur.get(i), rhs),
            ));
        }
        checks.push(Check::with_detail(
            format!("(2) n={j}"),
            cur.get(0) <= prev.get(1),
            format!("{} <= {}", cur.get(0), prev.get(1)),
        ));
        checks.push(Check::with_detail(
            format!("(3) n={j}"),
            cur.get(0) == res.betti[j],
            format!("{} = {}", cur.get(0), res.betti[j]),
        ));
        if j >= 2 {
            let rhs = b_prev * hr.get(e);
            checks.push(Check::with_detail(
                format!("(4) n={j}"),
                cur.get(e) == rhs,
                format!("{} = {}", cur.get(e), rhs),
            ));
        }
    }
    FormulaReport::new("syzygy_profile_bounds", res.module().label(), alg.hash(), checks)
}

pub fn verify_syzygy_profile_bounds<F: Field>(m: &ActionModule<F>, n: usize) -> FormulaReport {
    let mut res = resolve(m, n);
    verify_syzygy_profile_bounds_from(&mut res, n)
}

/// Closed formulas for the profiles of `k`, `syz_1 k` and `syz_2 k`.
pub fn verify_low_syzygy_profiles<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>) -> FormulaReport {
    let res = resolve(&residue_field(a), 2);
    let e = a.embedding_dim() as i64;
    let hr = ring_profile(a);
    let b1 = res.betti[1];
    let mut checks = Vec::new();
    let profiles: Vec<KoszulProfile> = (0..=2).map(|n| koszul_profile(res.syzygy(n))).collect();
    for i in 0..=e {
        let expect = [
            binomial(e, i),
            binomial(e, i + 1) + hr.reduced(i),
            binomial(e, i + 2) + hr.reduced(i + 1) + b1 * hr.reduced(i),
        ];
        for (n, want) in expect.iter().enumerate() {
            let got = profiles[n].get(i);
            checks.push(Check::with_detail(
                format!("({}) i={i}", n + 1),
                got == *want,
                format!("{got} = {want}"),
            ));
        }
    }
    checks.push(Check::with_detail(
        "beta_1(k) = e",
        b1 as i64 == e,
        format!("{b1} = {e}"),
    ));
    FormulaReport::new("low_syzygy_profiles", "k", a.hash(), checks)
}

/// `h_e(syz_n k) = β_{n-1}(k) h_e(R) + C(e, n+e)` for `0 <= n <= n_max`.
pub fn verify_top_koszul_homology_from<F: Field>(res: &mut FreeResolution<F>, n_max: usize) -> FormulaReport {
    res.extend_to(n_max);
    let alg = res.module().algebra().clone();
    let e = alg.embedding_dim() as i64;
    let he = ring_profile(&alg).reduced(e);
    let mut checks = Vec::new();
    for n in 0..=n_max {
        let b_prev = if n == 0 { 0 } else { res.betti[n - 1] };
        let want = b_prev * he + binomial(e, n as i64 + e);
        let got = koszul_profile(res.syzygy(n)).get(e);
        checks.push(Check::with_detail(
            format!("n={n}"),
            got == want,
            format!("{got} = {want}"),
        ));
    }
    FormulaReport::new("top_koszul_homology", res.module().label(), alg.hash(), checks)
}

pub fn verify_top_koszul_homology<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>, n_max: usize) -> FormulaReport {
    let mut res = resolve(&residue_field(a), n_max);
    verify_top_koszul_homology_from(&mut res, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::maximal_ideal;
    use crate::modules::tests::alg_q;

    #[test]
    fn subset_order() {
        assert_eq!(subsets(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets(3, 0), vec![0]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn profiles() {
        let a = alg_q("vars x,y,z; rels x^2,y^2,z^2;");
        assert_eq!(koszul_profile(&residue_field(&a)).h, vec![1, 3, 3, 1]);
        let a = alg_q("vars x,y; rels x^2,x*y,y^2;");
        assert_eq!(ring_profile(&a).h, vec![1, 3, 2]);
        assert_eq!(koszul_profile(&maximal_ideal(&a)).h, vec![2, 4, 2]);
        let a = alg_q("vars x,y; rels x^2,y^2;");
        assert_eq!(ring_profile(&a).h, vec![1, 2, 1]);
        assert_eq!(koszul_profile(&maximal_ideal(&a)).h, vec![2, 3, 1]);
    }

    #[test]
    fn ungraded_profile_matches() {
        let a = alg_q("vars x,y; rels x^2 + y^3, y^2;");
        assert_eq!(ring_profile(&a).h, vec![1, 2, 1]);
        // a linear relation leaves one Koszul generator
        let a = alg_q("vars x,y; rels x - y^2, y^3;");
        assert_eq!(ring_profile(&a).h, vec![1, 1]);
        assert!(is_hypersurface(&a));
    }

    #[test]
    fn depth_is_zero() {
        let a = alg_q("vars x,y; rels x^2,x*y,y^2;");
        assert_eq!(depth_from_koszul(&free_module(&a, 1)), Ok(0));
        assert_eq!(depth_from_koszul(&residue_field(&a)), Ok(0));
        assert_eq!(depth_from_koszul(&maximal_ideal(&a)), Ok(0));
        assert_eq!(depth_from_koszul(&free_module(&a, 0)), Err(KoszulError::ZeroModule));
        assert!(!is_hypersurface(&a));
    }

    #[test]
    fn identity_reports() {
        let a = alg_q("vars x,y; rels x^2,x*y,y^2;");
        let mut res = resolve(&residue_field(&a), 3);
        let r = verify_syzygy_profile_bounds_from(&mut res, 2);
        assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(koszul_profile(res.syzygy(2)).h[2], 4);
        assert_eq!(koszul_profile(res.syzygy(3)).h[2], 8);
        assert!(verify_low_syzygy_profiles(&a).passed);
        assert!(verify_top_koszul_homology(&a, 3).passed);

        let b = alg_q("vars x; rels x^2;");
        let mut res = resolve(&residue_field(&b), 2);
        assert!(verify_syzygy_profile_bounds_from(&mut res, 2).passed);
        assert_eq!(koszul_profile(res.syzygy(2)).h[1], 1);

        let c = alg_q("vars x,y; rels x^2,y^2;");
        assert!(verify_low_syzygy_profiles(&c).passed);
        assert!(verify_syzygy_profile_bounds(&free_module(&c, 2), 3).passed);
        assert!(verify_top_koszul_homology(&c, 4).passed);
    }

    #[test]
    fn invariants_hold() {
        let a = alg_q("vars x,y,z; rels x^3,y^3,z^3,x*y,x*z^2;");
        for m in [residue_field(&a), maximal_ideal(&a), free_module(&a, 1)] {
            assert!(profile_invariants(&m).iter().all(|c| c.holds), "{}", m.label());
        }
    }
}
