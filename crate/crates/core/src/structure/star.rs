//! Summand relations among syzygies of `k` and the probes built on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::summand::{
    decompose, match_decompositions, simple_summand_split, summand_test, verify_split,
    Decomposition,
};
use super::{prime_of, StructureError, SyzygyTower};
use crate::algebra::FiniteLocalAlgebra;
use crate::arith::{kernel_of_columns, Field};
use crate::koszul::{is_hypersurface, koszul_profile};
use crate::modules::{
    canonical_module, ext_dims_from, free_module, resolve, tor_dims_from, ActionModule,
};
use crate::report::{all_hold, Check};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarPair {
    pub a: usize,
    pub b: usize,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarScanReport {
    pub algebra_hash: String,
    pub field: String,
    pub bound: usize,
    pub seed: u64,
    /// Certified pairs `a < b` in lexicographic order.
    pub pairs: Vec<StarPair>,
    /// Pairs neither certified nor refuted (outside a prime field).
    pub undecided: Vec<(usize, usize)>,
    /// Some pair was ruled out only by the random search.
    pub monte_carlo: bool,
}

impl StarScanReport {
    pub fn holds(&self) -> bool {
        !self.pairs.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.iter().any(|p| p.a == a && p.b == b)
    }
}

enum PairOutcome {
    Certified(&'static str),
    Proof,
    MonteCarlo,
    Undecided,
}

/// Necessary conditions for `X | Y` that are cheap and exact: dimensions,
/// generator counts, socle dimensions and Koszul profiles.
fn invariants_allow<F: Field>(x: &ActionModule<F>, y: &ActionModule<F>) -> bool {
    let (px, py) = (koszul_profile(x), koszul_profile(y));
    x.dim() <= y.dim()
        && x.num_generators() <= y.num_generators()
        && x.socle().len() <= y.socle().len()
        && px.h.iter().zip(&py.h).all(|(a, b)| a <= b)
}

/// All pairs `a < b <= bound` with `syz_a(k) | syz_b(k)` that can be
/// certified. Pairs `(0, b)` are decided exactly by the socle criterion over
/// any field; the rest need a prime field.
pub fn star_property_scan<F: Field>(
    t: &mut SyzygyTower<F>,
    bound: usize,
    seed: u64,
) -> Result<StarScanReport, StructureError> {
    t.ensure(bound);
    let syz: Vec<ActionModule<F>> = (0..=bound).map(|n| t.syzygy(n).clone()).collect();
    let prime = prime_of(t.algebra().field()).is_some();
    let pairs: Vec<(usize, usize)> = (0..=bound)
        .flat_map(|a| (a + 1..=bound).map(move |b| (a, b)))
        .collect();
    // decompositions are only needed for pairs that survive the invariants
    let needed: Vec<usize> = if prime {
        let mut v: Vec<usize> = pairs
            .iter()
            .filter(|&&(a, b)| a > 0 && invariants_allow(&syz[a], &syz[b]))
            .flat_map(|&(a, b)| [a, b])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    } else {
        Vec::new()
    };
    let decomps: BTreeMap<usize, Decomposition<F>> = needed
        .par_iter()
        .map(|&n| decompose(&syz[n], seed.wrapping_add(n as u64)).map(|d| (n, d)))
        .collect::<Result<_, _>>()?;
    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<PairOutcome, StructureError> {
            if a == 0 {
                return Ok(match simple_summand_split(&syz[b]) {
                    Some(_) => PairOutcome::Certified("socle"),
                    None => PairOutcome::Proof,
                });
            }
            if !invariants_allow(&syz[a], &syz[b]) {
                return Ok(PairOutcome::Proof);
            }
            if !prime {
                return Ok(PairOutcome::Undecided);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((a as u64) << 32) ^ b as u64);
            Ok(match match_decompositions(&decomps[&a], &decomps[&b], &mut rng)? {
                Some((f, g)) if verify_split(&syz[a], &syz[b], &f, &g) => {
                    PairOutcome::Certified("decomposition")
                }
                Some(_) => {
                    return Err(StructureError::Invariant(format!(
                        "assembled split for ({a}, {b}) does not verify"
                    )))
                }
                None => PairOutcome::MonteCarlo,
            })
        })
        .collect::<Result<_, _>>()?;
    let mut report = StarScanReport {
        algebra_hash: t.algebra().hash().to_string(),
        field: t.algebra().field().spec().to_string(),
        bound,
        seed,
        pairs: Vec::new(),
        undecided: Vec::new(),
        monte_carlo: false,
    };
    for (&(a, b), o) in pairs.iter().zip(outcomes) {
        match o {
            PairOutcome::Certified(method) => report.pairs.push(StarPair {
                a,
                b,
                method: method.to_string(),
            }),
            PairOutcome::Proof => {}
            PairOutcome::MonteCarlo => report.monte_carlo = true,
            PairOutcome::Undecided => report.undecided.push((a, b)),
        }
    }
    Ok(report)
}

/// `k` is a direct summand of `syz_2(k)`.
pub fn burch_depth_zero_test<F: Field>(t: &mut SyzygyTower<F>) -> bool {
    simple_summand_split(t.syzygy(2)).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub algebra_hash: String,
    pub bound: usize,
    /// `hits[n - 1]`: `k` is a summand of `syz_n(k)`.
    pub hits: Vec<bool>,
    pub first_hit: Option<usize>,
    pub exceptional: bool,
}

/// No `syz_n(k)` with `1 <= n <= bound` has `k` as a direct summand.
pub fn exceptional_test<F: Field>(t: &mut SyzygyTower<F>, bound: usize) -> ExceptionalReport {
    t.ensure(bound);
    let hits: Vec<bool> = (1..=bound)
        .map(|n| simple_summand_split(t.syzygy(n)).is_some())
        .collect();
    let first_hit = hits.iter().position(|&h| h).map(|i| i + 1);
    ExceptionalReport {
        algebra_hash: t.algebra().hash().to_string(),
        bound,
        hits,
        first_hit,
        exceptional: first_hit.is_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub algebra_hash: String,
    pub module: String,
    pub a: usize,
    pub b: usize,
    pub bound: usize,
    pub seed: u64,
    /// `a > b`: only the hypersurface alternative is checked.
    pub dichotomy: bool,
    pub hypersurface: bool,
    pub betti: Vec<usize>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Given `syz_a(k) | syz_b(k)` with `p = b - a`, the Betti numbers of `M`
/// along each residue class mod `p` are non-decreasing past `a`, and
/// `β_{j}(M) = β_{j-p}(M) + dim Tor_{j-b}(N, M)` where
/// `syz_b(k) = syz_a(k) ⊕ N`.
pub fn monotonicity_check<F: Field>(
    t: &mut SyzygyTower<F>,
    m: &ActionModule<F>,
    a: usize,
    b: usize,
    bound: usize,
    seed: u64,
) -> Result<MonotonicityReport, StructureError> {
    let alg = t.algebra().clone();
    let hyper = is_hypersurface(&alg);
    let mut report = MonotonicityReport {
        algebra_hash: alg.hash().to_string(),
        module: m.label().to_string(),
        a,
        b,
        bound,
        seed,
        dichotomy: a >= b,
        hypersurface: hyper,
        betti: Vec::new(),
        checks: Vec::new(),
        passed: false,
    };
    t.ensure(a.max(b));
    let sa = t.syzygy(a).clone();
    let sb = t.syzygy(b).clone();
    let cert = summand_test(&sa, &sb, seed)?;
    if !cert.is_certificate() || !cert.verify(&sa, &sb) {
        return Err(StructureError::NoCertificate(a, b));
    }
    if a >= b {
        report.checks.push(Check::new("a < b or R is a hypersurface", hyper));
        report.passed = all_hold(&report.checks);
        return Ok(report);
    }
    let super::SummandOutcome::Split { g, .. } = &cert.outcome else {
        unreachable!()
    };
    // N = ker(g) complements the image of f
    let f = alg.field().clone();
    let ker = kernel_of_columns::<F, ()>(&f, g.rows(), g.columns(), None);
    let n_mod = sb.restrict(&ker, "N").ungraded();
    let res = resolve(m, bound);
    report.betti = res.betti[..=bound].to_vec();
    let p = b - a;
    let tor = if bound >= b {
        tor_dims_from(&res, &n_mod, bound - b)
    } else {
        Vec::new()
    };
    for q in 1..=p {
        let mut n = 0;
        while p * (n + 1) + q <= bound {
            let (lo, hi) = (p * n + q, p * (n + 1) + q);
            if lo > a {
                let (bl, bh) = (res.betti[lo], res.betti[hi]);
                report.checks.push(Check::with_detail(
                    format!("beta_{hi} >= beta_{lo}"),
                    bh >= bl,
                    format!("{bh} >= {bl}"),
                ));
                let tor_i = lo - a;
                let t_dim = tor[tor_i];
                report.checks.push(Check::with_detail(
                    format!("beta_{hi} = beta_{lo} + Tor_{tor_i}(N, M)"),
                    bh == bl + t_dim,
                    format!("{bh} = {bl} + {t_dim}"),
                ));
            }
            n += 1;
        }
    }
    report.passed = all_hold(&report.checks);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TachikawaReport {
    pub algebra_hash: String,
    pub precision: usize,
    /// `ext[i - 1] = dim Ext^i(K_R, R)`, computed until the first nonzero.
    pub ext: Vec<usize>,
    pub first_nonvanishing: Option<usize>,
    pub gorenstein: bool,
    pub hypersurface: bool,
    pub canonical_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<bool>,
    /// `(*)` holds, `R` is not a hypersurface, and no nonzero Ext was found
    /// within precision.
    pub witness_missing: bool,
    pub consistent: bool,
}

/// `dim Ext^i(K_R, R)` for `1 <= i <= n_max`, stopping at the first nonzero.
/// When `star` is known the result is cross-checked against the fact
/// that `(*)` with vanishing Ext forces a hypersurface.
pub fn tachikawa_probe<F: Field>(
    a: &Arc<FiniteLocalAlgebra<F>>,
    n_max: usize,
    star: Option<bool>,
) -> TachikawaReport {
    let kr = canonical_module(a);
    let r = free_module(a, 1);
    let mut res = resolve(&kr, 1);
    let canonical_free = res.betti[0] == 1 && res.betti[1] == 0;
    let mut ext = Vec::new();
    let mut first = None;
    for i in 1..=n_max {
        res.extend_to(i + 1);
        let d = ext_dims_from(&res, &r, i)[i];
        ext.push(d);
        if d != 0 {
            first = Some(i);
            break;
        }
    }
    let gorenstein = a.is_gorenstein();
    let hypersurface = is_hypersurface(a);
    let witness_missing = star == Some(true) && !hypersurface && first.is_none();
    let consistent = !witness_missing && (!gorenstein || first.is_none());
    TachikawaReport {
        algebra_hash: a.hash().to_string(),
        precision: n_max,
        ext,
        first_nonvanishing: first,
        gorenstein,
        hypersurface,
        canonical_free,
        star,
        witness_missing,
        consistent,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trend {
    Constant,
    StrictlyIncreasing,
    NonDecreasing,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub module: String,
    pub algebra_hash: String,
    pub betti: Vec<usize>,
    /// Over `1 <= i <= n_max`.
    pub min: usize,
    pub max: usize,
    pub trend: Trend,
    pub tail_constant: bool,
}

/// Shape of `β_1(M), ..., β_{n_max}(M)`.
pub fn betti_boundedness_probe<F: Field>(m: &ActionModule<F>, n_max: usize) -> BoundednessReport {
    let res = resolve(m, n_max);
    let tail: Vec<usize> = res.betti[1.min(n_max)..].to_vec();
    let pairs: Vec<(usize, usize)> = tail.windows(2).map(|w| (w[0], w[1])).collect();
    let trend = if pairs.iter().all(|(x, y)| x == y) {
        Trend::Constant
    } else if pairs.iter().all(|(x, y)| x < y) {
        Trend::StrictlyIncreasing
    } else if pairs.iter().all(|(x, y)| x <= y) {
        Trend::NonDecreasing
    } else {
        Trend::Other
    };
    BoundednessReport {
        module: m.label().to_string(),
        algebra_hash: m.algebra().hash().to_string(),
        min: tail.iter().copied().min().unwrap_or(0),
        max: tail.iter().copied().max().unwrap_or(0),
        tail_constant: pairs.last().is_some_and(|(x, y)| x == y),
        trend,
        betti: res.betti,
    }
}
