//! Serre's bound, the Golod criterion and the recursive decomposition of
//! syzygies of `k`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dense::Dense;
use super::summand::{classify, decompose, Decomposition};
use super::{prime_of, StructureError, SyzygyTower};
use crate::arith::{ExactMatrix, Field};
use crate::modules::{direct_sum_or_zero, ActionModule};
use crate::report::{all_hold, binomial, Check, SparseMatrixRecord};

/// `β_n(k)`, Serre's bound and their difference for `0 <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreBound {
    pub betti: Vec<usize>,
    pub bounds: Vec<usize>,
    pub slacks: Vec<usize>,
}

/// `Σ_{j=1}^{e} β_{n-j-1}(k) h_j(R) + C(e, n)`.
fn serre_bound<F: Field>(t: &mut SyzygyTower<F>, n: usize) -> usize {
    let e = t.embedding_dim() as i64;
    let n = n as i64;
    let mut acc = binomial(e, n);
    for j in 1..=e {
        acc += t.betti(n - j - 1) * t.h(j);
    }
    acc
}

/// Slack of Serre's bound in every degree up to `n_max`; a negative slack
/// means the computation is wrong and is reported as an error.
pub fn serre_bound_check<F: Field>(
    t: &mut SyzygyTower<F>,
    n_max: usize,
) -> Result<SerreBound, StructureError> {
    let betti = t.betti_upto(n_max);
    let mut bounds = Vec::with_capacity(n_max + 1);
    let mut slacks = Vec::with_capacity(n_max + 1);
    for (n, &b) in betti.iter().enumerate() {
        let bound = serre_bound(t, n);
        if bound < b {
            return Err(StructureError::NegativeSlack {
                degree: n,
                slack: bound as i64 - b as i64,
            });
        }
        bounds.push(bound);
        slacks.push(bound - b);
    }
    Ok(SerreBound {
        betti,
        bounds,
        slacks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GolodVerdict {
    GolodToPrecision,
    /// First degree with positive slack.
    NotGolod(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GolodReport {
    pub algebra_hash: String,
    pub precision: usize,
    pub ring_profile: Vec<usize>,
    pub betti: Vec<usize>,
    pub bounds: Vec<usize>,
    pub slacks: Vec<usize>,
    pub verdict: GolodVerdict,
}

impl GolodReport {
    pub fn is_golod(&self) -> bool {
        self.verdict == GolodVerdict::GolodToPrecision
    }
}

/// Golod up to degree `n_max`: every slack of Serre's bound vanishes.
pub fn golod_check<F: Field>(
    t: &mut SyzygyTower<F>,
    n_max: usize,
) -> Result<GolodReport, StructureError> {
    let s = serre_bound_check(t, n_max)?;
    let verdict = match s.slacks.iter().position(|&x| x > 0) {
        Some(n) => GolodVerdict::NotGolod(n),
        None => GolodVerdict::GolodToPrecision,
    };
    Ok(GolodReport {
        algebra_hash: t.algebra().hash().to_string(),
        precision: n_max,
        ring_profile: t.ring_profile().h.clone(),
        betti: s.betti,
        bounds: s.bounds,
        slacks: s.slacks,
        verdict,
    })
}

/// The three equivalent conditions evaluated in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub n: usize,
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionTable {
    pub algebra_hash: String,
    pub e: usize,
    /// Largest degree of the resolution used.
    pub depth: usize,
    pub l_max: usize,
    /// `b[n]` is `(B_n)`.
    pub b: Vec<bool>,
    /// `h[m][l]` is `(H_{m,l})`.
    pub h: Vec<Vec<bool>>,
    pub equivalences: Vec<ConditionRow>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// `(H_{m,l})`: `h_m(syz_{e+l+1}) = Σ_j h_m(syz_{e+l-j}) h_j(R)`.
fn condition_h<F: Field>(t: &mut SyzygyTower<F>, m: i64, l: i64) -> bool {
    let e = t.embedding_dim() as i64;
    let lhs = t.syz_h(m, e + l + 1);
    let mut rhs = 0;
    for j in 1..=e {
        rhs += t.syz_h(m, e + l - j) * t.h(j);
    }
    lhs == rhs
}

fn condition_row<F: Field>(t: &mut SyzygyTower<F>, n: usize) -> ConditionRow {
    let e = t.embedding_dim() as i64;
    let ni = n as i64;
    let a = t.betti(ni) == serre_bound(t, n);
    let mut b = true;
    let mut c = true;
    for i in 0..ni {
        let lhs = t.syz_h(i, ni - i);
        let rec = if i == 0 {
            t.syz_h(1, ni - 1)
        } else {
            t.betti(ni - i - 1) * t.h(i) + t.syz_h(i + 1, ni - i - 1)
        };
        b &= lhs == rec;
        let mut closed = binomial(e, ni);
        for j in i.max(1)..=e {
            closed += t.betti(ni - j - 1) * t.h(j);
        }
        c &= lhs == closed;
    }
    ConditionRow { n, a, b, c }
}

/// Truth table of `(B_n)` and `(H_{m,l})` with the implications between
/// them checked wherever the computed range supports them.
pub fn bn_hml_table<F: Field>(t: &mut SyzygyTower<F>, n_max: usize, l_max: usize) -> ConditionTable {
    let e = t.embedding_dim();
    let depth = n_max.max(e + l_max + 1);
    t.ensure(depth);
    let b: Vec<bool> = (0..=depth).map(|n| t.betti(n as i64) == serre_bound(t, n)).collect();
    let h: Vec<Vec<bool>> = (0..=e)
        .map(|m| (0..=l_max).map(|l| condition_h(t, m as i64, l as i64)).collect())
        .collect();
    let equivalences: Vec<ConditionRow> = (0..=depth).map(|n| condition_row(t, n)).collect();
    let mut checks = Vec::new();
    if e > 0 {
        for r in &equivalences {
            checks.push(Check::with_detail(
                format!("equivalences(2) n={}", r.n),
                r.a == r.b && r.b == r.c,
                format!("a={} b={} c={}", r.a, r.b, r.c),
            ));
        }
    }
    let b_from = |lo: usize| b[lo.min(depth + 1)..].iter().all(|&x| x);
    for a in 0..=e {
        for l in 0..=l_max {
            if a + l + e + 1 <= depth && b_from(a + l) {
                checks.push(Check::new(format!("B_n for n >= {} implies H_{{{a},{l}}}", a + l), h[a][l]));
            }
        }
        if a + e + 1 <= depth && b_from(a + 1) && h[a][0] {
            checks.push(Check::new(format!("B_n for n > {a} and H_{{{a},0}} imply B_{a}"), b[a]));
        }
    }
    let passed = all_hold(&checks);
    ConditionTable {
        algebra_hash: t.algebra().hash().to_string(),
        e,
        depth,
        l_max,
        b,
        h,
        equivalences,
        checks,
        passed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionMode {
    Numeric,
    /// Also decompose both sides over a prime field and certify an
    /// isomorphism; shifts whose left side exceeds `max_dim` are skipped.
    Structural { max_dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftResult {
    pub shift: usize,
    pub betti_checks: Vec<Check>,
    pub profile_checks: Vec<Check>,
    pub numeric_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structural_holds: Option<bool>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub structural_detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isomorphism: Option<SparseMatrixRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GolodDecompositionReport {
    pub algebra_hash: String,
    pub precision: usize,
    pub max_shift: usize,
    pub mode: DecompositionMode,
    pub seed: u64,
    pub ring_profile: Vec<usize>,
    pub shifts: Vec<ShiftResult>,
    pub numeric_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structural_holds: Option<bool>,
    pub golod_verdict: GolodVerdict,
    /// The Golod verdict and the numeric decomposition verdict agree.
    pub consistent: bool,
}

/// Compares `syz_{e+1+s}(k)` with `⊕_j syz_{e-j+s}(k)^{h_j}` for
/// `0 <= s <= max_shift`: Betti numbers up to `precision`, Koszul profiles
/// `h_a` where `a + e + 1 + s <= precision`, and optionally an explicit
/// isomorphism.
pub fn verify_golod_decomposition<F: Field>(
    t: &mut SyzygyTower<F>,
    max_shift: usize,
    precision: usize,
    mode: DecompositionMode,
    seed: u64,
) -> Result<GolodDecompositionReport, StructureError> {
    let e = t.embedding_dim();
    let ei = e as i64;
    let golod = golod_check(t, precision)?;
    let mut shifts = Vec::new();
    let mut decomps: BTreeMap<usize, Decomposition<F>> = BTreeMap::new();
    for s in 0..=max_shift {
        if e + 1 + s > precision {
            break;
        }
        let si = s as i64;
        let mut betti_checks = Vec::new();
        for i in 0..=(precision - e - 1 - s) as i64 {
            let lhs = t.betti(ei + 1 + si + i);
            let rhs: usize = (1..=ei).map(|j| t.h(j) * t.betti(ei - j + si + i)).sum();
            betti_checks.push(Check::with_detail(format!("beta_{i}"), lhs == rhs, format!("{lhs} vs {rhs}")));
        }
        let mut profile_checks = Vec::new();
        for a in 0..=ei {
            if a + ei + 1 + si > precision as i64 {
                break;
            }
            let lhs = t.syz_h(a, ei + 1 + si);
            let rhs: usize = (1..=ei).map(|j| t.h(j) * t.syz_h(a, ei - j + si)).sum();
            profile_checks.push(Check::with_detail(format!("h_{a}"), lhs == rhs, format!("{lhs} vs {rhs}")));
        }
        let numeric_holds = all_hold(&betti_checks) && all_hold(&profile_checks);
        let mut result = ShiftResult {
            shift: s,
            betti_checks,
            profile_checks,
            numeric_holds,
            structural_holds: None,
            structural_detail: String::new(),
            isomorphism: None,
        };
        if let DecompositionMode::Structural { max_dim } = mode {
            if prime_of(t.algebra().field()).is_none() {
                return Err(StructureError::UnsupportedField("structural verification"));
            }
            let lhs_dim = t.syzygy(e + 1 + s).dim();
            if lhs_dim > max_dim {
                result.structural_detail = format!("skipped: dim {lhs_dim} > {max_dim}");
            } else {
                let (holds, detail, iso) = structural_shift(t, s, seed, &mut decomps)?;
                result.structural_holds = Some(holds);
                result.structural_detail = detail;
                result.isomorphism = iso.as_ref().map(SparseMatrixRecord::from_matrix);
            }
        }
        shifts.push(result);
    }
    let numeric_holds = shifts.iter().all(|r| r.numeric_holds);
    let structural_holds = match mode {
        DecompositionMode::Numeric => None,
        DecompositionMode::Structural { .. } => {
            let decided: Vec<bool> = shifts.iter().filter_map(|r| r.structural_holds).collect();
            (!decided.is_empty()).then(|| decided.iter().all(|&x| x))
        }
    };
    Ok(GolodDecompositionReport {
        algebra_hash: t.algebra().hash().to_string(),
        precision,
        max_shift,
        mode,
        seed,
        ring_profile: t.ring_profile().h.clone(),
        consistent: golod.is_golod() == numeric_holds,
        golod_verdict: golod.verdict,
        shifts,
        numeric_holds,
        structural_holds,
    })
}

/// Places `m` at row offset `offset` inside `total` rows.
fn shift_rows<F: Field>(m: &ExactMatrix<F>, offset: usize, total: usize) -> ExactMatrix<F> {
    let cols = m
        .columns()
        .iter()
        .map(|c| c.iter().map(|(i, x)| (i + offset, x.clone())).collect())
        .collect();
    ExactMatrix::from_columns(m.field().clone(), total, cols)
}

fn decomposition_of<'a, F: Field>(
    t: &mut SyzygyTower<F>,
    n: usize,
    seed: u64,
    cache: &'a mut BTreeMap<usize, Decomposition<F>>,
) -> Result<&'a Decomposition<F>, StructureError> {
    if !cache.contains_key(&n) {
        let m = t.syzygy(n).clone();
        let d = if m.is_zero() {
            Decomposition {
                module: m,
                pieces: Vec::new(),
                classes: Vec::new(),
                seed,
                trials: 0,
            }
        } else {
            decompose(&m, seed.wrapping_add(n as u64))?
        };
        cache.insert(n, d);
    }
    Ok(&cache[&n])
}

/// Matches the indecomposable factors of both sides of one shift and, when
/// they agree, assembles and verifies an isomorphism.
fn structural_shift<F: Field>(
    t: &mut SyzygyTower<F>,
    s: usize,
    seed: u64,
    cache: &mut BTreeMap<usize, Decomposition<F>>,
) -> Result<(bool, String, Option<ExactMatrix<F>>), StructureError> {
    let e = t.embedding_dim();
    let lhs_n = e + 1 + s;
    let rhs: Vec<(usize, usize)> = (1..=e)
        .map(|j| (e - j + s, t.h(j as i64)))
        .filter(|&(_, h)| h > 0)
        .collect();
    for n in std::iter::once(lhs_n).chain(rhs.iter().map(|&(n, _)| n)) {
        decomposition_of(t, n, seed, cache)?;
    }
    let lhs = &cache[&lhs_n];
    // all pieces of the left side, then of each distinct right-hand syzygy
    let mut mods: Vec<&ActionModule<F>> = lhs.pieces.iter().map(|p| &p.module).collect();
    let mut offsets: BTreeMap<usize, usize> = BTreeMap::new();
    for &(n, _) in &rhs {
        if let std::collections::btree_map::Entry::Vacant(v) = offsets.entry(n) {
            v.insert(mods.len());
            mods.extend(cache[&n].pieces.iter().map(|p| &p.module));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000 ^ s as u64);
    let (classes, isos) = classify(&mods, &mut rng, super::ISO_TRIALS)?;
    // slots on the right: (class, global piece index, row offset in the sum)
    let mut slots: Vec<(usize, usize, usize, bool)> = Vec::new();
    let mut row = 0;
    let mut summands: Vec<&ActionModule<F>> = Vec::new();
    for &(n, h) in &rhs {
        let d = &cache[&n];
        for _ in 0..h {
            let mut inner = 0;
            for (q, _) in d.pieces.iter().enumerate() {
                let g = offsets[&n] + q;
                slots.push((classes[g], g, row + inner, false));
                inner += d.pieces[q].module.dim();
            }
            summands.push(&d.module);
            row += d.module.dim();
        }
    }
    let total = row;
    let lhs_dim = lhs.module.dim();
    let lhs_count = lhs.pieces.len();
    if total != lhs_dim || slots.len() != lhs_count {
        return Ok((
            false,
            format!("{lhs_count} factors of total dim {lhs_dim} vs {} factors of total dim {total}", slots.len()),
            None,
        ));
    }
    let f = lhs.module.field().clone();
    let mut phi_total = ExactMatrix::zeros(f, total, lhs_dim);
    for (p, piece) in lhs.pieces.iter().enumerate() {
        let Some(slot) = slots.iter_mut().find(|sl| !sl.3 && sl.0 == classes[p]) else {
            return Ok((false, "indecomposable factors differ".into(), None));
        };
        slot.3 = true;
        let (g, off) = (slot.1, slot.2);
        let n_of_g = *offsets
            .iter()
            .filter(|(_, &o)| o <= g)
            .max_by_key(|(_, &o)| o)
            .unwrap()
            .0;
        let q = g - offsets[&n_of_g];
        let target = &cache[&n_of_g].pieces[q];
        let phi = isos[g]
            .matmul(&isos[p].inverse().expect("isomorphism"))
            .expect("shapes");
        let part = target
            .inclusion
            .matmul(&phi)
            .and_then(|m| m.matmul(&piece.projection))
            .expect("shapes");
        // `target.inclusion` lives in its syzygy; its block starts at
        // `off - (offset of the piece within that syzygy)`
        let inner: usize = cache[&n_of_g].pieces[..q].iter().map(|x| x.module.dim()).sum();
        phi_total = phi_total
            .add(&shift_rows(&part, off - inner, total))
            .expect("shapes");
    }
    let alg = t.algebra().clone();
    let rhs_module = direct_sum_or_zero(&alg, &summands).ungraded();
    let lhs_module = lhs.module.ungraded();
    let ok = lhs_module.is_equivariant(&rhs_module, &phi_total)
        && Dense::from_exact(&phi_total).rank() == lhs_dim;
    let detail = format!("{lhs_count} indecomposable factors matched");
    Ok((ok, detail, ok.then_some(phi_total)))
}
