//! Direct summand certificates and randomized decomposition.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dense::{find_root, Dense};
use super::{prime_of, StructureError};
use crate::arith::{
    echelon_from_rref, kernel_of_columns, span_of, Echelon, ExactMatrix, Field, SparseVec,
    Subspace,
};
use crate::koszul::koszul_profile;
use crate::modules::{hom_module, ActionModule};
use crate::report::{all_hold, Check, SparseMatrixRecord};

/// Trials per factor before declaring it indecomposable.
pub const SPLIT_TRIALS: usize = 64;
/// Random maps tried before declaring two indecomposables non-isomorphic.
pub const ISO_TRIALS: usize = 32;

/// Why a summand relation was ruled out. `SocleCriterion`, `Dimension` and
/// `Invariant` are proofs; the others are one-sided Monte Carlo outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refutation {
    SocleCriterion,
    Dimension,
    Invariant,
    DecompositionMismatch,
    SearchExhausted(usize),
}

impl Refutation {
    pub fn is_proof(&self) -> bool {
        matches!(
            self,
            Refutation::SocleCriterion | Refutation::Dimension | Refutation::Invariant
        )
    }
}

#[derive(Debug, Clone)]
pub enum SummandOutcome<F: Field> {
    /// `f: A -> B`, `g: B -> A` with `g f = id`.
    Split { f: ExactMatrix<F>, g: ExactMatrix<F> },
    Refuted(Refutation),
}

#[derive(Debug, Clone)]
pub struct SummandCertificate<F: Field> {
    pub summand: String,
    pub module: String,
    pub algebra_hash: String,
    pub method: String,
    pub seed: Option<u64>,
    pub outcome: SummandOutcome<F>,
}

/// JSON form of a [`SummandCertificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandRecord {
    pub summand: String,
    pub module: String,
    pub algebra_hash: String,
    pub method: String,
    pub seed: Option<u64>,
    pub is_summand: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Refutation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<SparseMatrixRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<SparseMatrixRecord>,
}

impl<F: Field> SummandCertificate<F> {
    pub fn is_certificate(&self) -> bool {
        matches!(self.outcome, SummandOutcome::Split { .. })
    }

    pub fn refutation(&self) -> Option<Refutation> {
        match self.outcome {
            SummandOutcome::Refuted(r) => Some(r),
            SummandOutcome::Split { .. } => None,
        }
    }

    /// Exact check of a split pair: both maps equivariant and `g f = id`.
    /// Refutations verify trivially.
    pub fn verify(&self, a: &ActionModule<F>, b: &ActionModule<F>) -> bool {
        match &self.outcome {
            SummandOutcome::Refuted(_) => true,
            SummandOutcome::Split { f, g } => verify_split(a, b, f, g),
        }
    }

    pub fn record(&self) -> SummandRecord {
        let (f, g, refutation) = match &self.outcome {
            SummandOutcome::Split { f, g } => (
                Some(SparseMatrixRecord::from_matrix(f)),
                Some(SparseMatrixRecord::from_matrix(g)),
                None,
            ),
            SummandOutcome::Refuted(r) => (None, None, Some(*r)),
        };
        SummandRecord {
            summand: self.summand.clone(),
            module: self.module.clone(),
            algebra_hash: self.algebra_hash.clone(),
            method: self.method.clone(),
            seed: self.seed,
            is_summand: self.is_certificate(),
            refutation,
            f,
            g,
        }
    }
}

pub fn verify_split<F: Field>(
    a: &ActionModule<F>,
    b: &ActionModule<F>,
    f: &ExactMatrix<F>,
    g: &ExactMatrix<F>,
) -> bool {
    if f.rows() != b.dim() || f.cols() != a.dim() || g.rows() != a.dim() || g.cols() != b.dim() {
        return false;
    }
    a.is_equivariant(b, f)
        && b.is_equivariant(a, g)
        && g.matmul(f).ok() == Some(ExactMatrix::identity(a.field().clone(), a.dim()))
}

fn certificate<F: Field>(
    a: &ActionModule<F>,
    b: &ActionModule<F>,
    method: &str,
    seed: Option<u64>,
    outcome: SummandOutcome<F>,
) -> SummandCertificate<F> {
    SummandCertificate {
        summand: a.label().to_string(),
        module: b.label().to_string(),
        algebra_hash: b.algebra().hash().to_string(),
        method: method.to_string(),
        seed,
        outcome,
    }
}

/// Normal form of every standard basis vector modulo the span held in `e`,
/// read at column `c`: a linear functional vanishing on that span.
fn functional_at<F: Field>(e: &mut Echelon<F>, dim: usize, c: usize, scale: &F::Elem) -> SparseVec<F> {
    let f = e.field().clone();
    let mut row = Vec::new();
    for t in 0..dim {
        let r = e.reduce(&vec![(t, f.one())]);
        if let Some((_, x)) = r.iter().find(|(i, _)| *i == c) {
            row.push((t, f.mul(x, scale)));
        }
    }
    row
}

/// A split inclusion `k -> M` exists iff some socle vector lies outside `mM`.
pub fn simple_summand_split<F: Field>(m: &ActionModule<F>) -> Option<(SparseVec<F>, SparseVec<F>)> {
    let f = m.field().clone();
    let rad = m.radical();
    let mut e = echelon_from_rref(&rad);
    for v in m.socle() {
        let r = e.reduce(&v);
        if let Some((c, x)) = r.first() {
            let inv = f.inv(x).expect("nonzero");
            let phi = functional_at(&mut e, m.dim(), *c, &inv);
            return Some((v, phi));
        }
    }
    None
}

/// Is `k` a direct summand of `M`? The socle criterion decides this over
/// any field.
pub fn simple_summand_test<F: Field>(m: &ActionModule<F>) -> SummandCertificate<F> {
    let a = crate::modules::residue_field(m.algebra());
    let outcome = match simple_summand_split(m) {
        Some((v, phi)) => {
            let f = m.field().clone();
            let fm = ExactMatrix::from_columns(f.clone(), m.dim(), vec![v]);
            let gm = ExactMatrix::from_columns(f, m.dim(), vec![phi]).transpose();
            SummandOutcome::Split { f: fm, g: gm }
        }
        None => SummandOutcome::Refuted(Refutation::SocleCriterion),
    };
    certificate(&a, m, "socle", None, outcome)
}

/// Largest `r` with `R^r` a direct summand of `M`: the rank of the pairing
/// `Hom(M, R) x M/mM -> k`.
pub fn free_rank<F: Field>(m: &ActionModule<F>) -> Result<usize, StructureError> {
    Ok(free_summand_maps(m, usize::MAX)?.map_or(0, |(r, _, _)| r))
}

/// Split maps `R^r -> M -> R^r` for the largest `r <= want`.
#[allow(clippy::type_complexity)]
fn free_summand_maps<F: Field>(
    m: &ActionModule<F>,
    want: usize,
) -> Result<Option<(usize, ExactMatrix<F>, ExactMatrix<F>)>, StructureError> {
    let alg = m.algebra().clone();
    let f = alg.field().clone();
    let dr = alg.dim();
    let r_mod = crate::modules::free_module(&alg, 1);
    let hom = hom_module(m, &r_mod)?;
    let maps = hom.basis_matrices();
    let gens = m.generator_indices().to_vec();
    // pairing[s][t] = unit coefficient of phi_s(g_t)
    let pairing: Vec<SparseVec<F>> = maps
        .iter()
        .map(|phi| {
            gens.iter()
                .enumerate()
                .filter_map(|(t, &g)| {
                    phi.column(g)
                        .iter()
                        .find(|(i, _)| *i == 0)
                        .map(|(_, x)| (t, x.clone()))
                })
                .collect()
        })
        .collect();
    let mut cols_e = Echelon::new(f.clone(), gens.len());
    for row in &pairing {
        cols_e.insert(row);
    }
    let rank = cols_e.rank().min(want);
    if rank == 0 {
        return Ok(None);
    }
    // columns: pivots of the row space
    let chosen_t: Vec<usize> = cols_e.into_rref().pivots.into_iter().take(rank).collect();
    let mut rows_e = Echelon::new(f.clone(), rank);
    let mut chosen_s = Vec::new();
    for (s, row) in pairing.iter().enumerate() {
        let restricted: SparseVec<F> = row
            .iter()
            .filter_map(|(t, x)| chosen_t.iter().position(|c| c == t).map(|k| (k, x.clone())))
            .collect();
        if rows_e.insert(&restricted).is_some() {
            chosen_s.push(s);
            if chosen_s.len() == rank {
                break;
            }
        }
    }
    let mut f_cols = Vec::with_capacity(rank * dr);
    for &t in &chosen_t {
        f_cols.extend(m.orbit(&vec![(gens[t], f.one())]));
    }
    let fm = ExactMatrix::from_columns(f.clone(), m.dim(), f_cols);
    // stack the chosen functionals into M -> R^rank
    let mut g_cols: Vec<SparseVec<F>> = vec![Vec::new(); m.dim()];
    for (k, &s) in chosen_s.iter().enumerate() {
        for (c, col) in maps[s].columns().iter().enumerate() {
            for (i, x) in col {
                g_cols[c].push((k * dr + i, x.clone()));
            }
        }
    }
    let g0 = ExactMatrix::from_columns(f.clone(), rank * dr, g_cols);
    let c = g0.matmul(&fm).map_err(|e| StructureError::Invariant(e.to_string()))?;
    let cinv = c
        .inverse()
        .ok_or_else(|| StructureError::Invariant("free summand pairing not invertible".into()))?;
    let gm = cinv.matmul(&g0).map_err(|e| StructureError::Invariant(e.to_string()))?;
    Ok(Some((rank, fm, gm)))
}

/// Is `M` free? Returns the cover `R^b -> M` when it is an isomorphism.
fn free_cover<F: Field>(m: &ActionModule<F>) -> Option<ExactMatrix<F>> {
    let dr = m.algebra().dim();
    let b = m.num_generators();
    if m.dim() != b * dr {
        return None;
    }
    let f = m.field().clone();
    let mut cols = Vec::with_capacity(m.dim());
    for &g in m.generator_indices() {
        cols.extend(m.orbit(&vec![(g, f.one())]));
    }
    let cover = ExactMatrix::from_columns(f, m.dim(), cols);
    (cover.rank() == m.dim()).then_some(cover)
}

/// One factor of a decomposition, with its inclusion into and projection
/// from the decomposed module.
#[derive(Debug, Clone)]
pub struct Piece<F: Field> {
    pub module: ActionModule<F>,
    pub inclusion: ExactMatrix<F>,
    pub projection: ExactMatrix<F>,
    /// End of the piece is one-dimensional (or the piece is `k`).
    pub proven_indecomposable: bool,
}

#[derive(Debug, Clone)]
pub struct Decomposition<F: Field> {
    pub module: ActionModule<F>,
    pub pieces: Vec<Piece<F>>,
    /// Isomorphism class of each piece.
    pub classes: Vec<usize>,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandEntry {
    pub dim: usize,
    pub generators: usize,
    pub socle_dim: usize,
    pub multiplicity: usize,
    pub proven_indecomposable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub label: String,
    pub algebra_hash: String,
    pub field: String,
    pub seed: u64,
    pub trials: usize,
    pub exponent_cap: usize,
    pub summands: Vec<SummandEntry>,
    pub idempotents: Vec<SparseMatrixRecord>,
    pub checks: Vec<Check>,
    pub verified: bool,
    /// Indecomposability of some factor rests on the random search.
    pub monte_carlo: bool,
}

impl<F: Field> Decomposition<F> {
    pub fn idempotents(&self) -> Vec<ExactMatrix<F>> {
        self.pieces
            .iter()
            .map(|p| p.inclusion.matmul(&p.projection).expect("shapes"))
            .collect()
    }

    /// `(class, multiplicity)` in order of first appearance.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &c in &self.classes {
            match out.iter_mut().find(|(k, _)| *k == c) {
                Some(e) => e.1 += 1,
                None => out.push((c, 1)),
            }
        }
        out
    }

    pub fn num_indecomposables(&self) -> usize {
        self.pieces.len()
    }

    /// Orthogonality, completeness and equivariance of the idempotents,
    /// and the dimension count.
    pub fn verify(&self) -> Vec<Check> {
        let m = &self.module;
        let f = m.field().clone();
        let n = m.dim();
        let es = self.idempotents();
        let mut checks = Vec::new();
        let dims: usize = self.pieces.iter().map(|p| p.module.dim()).sum();
        checks.push(Check::with_detail("dimensions add up", dims == n, format!("{dims} = {n}")));
        let mut sum = ExactMatrix::zeros(f.clone(), n, n);
        let mut orthogonal = true;
        let mut equivariant = true;
        for (i, e) in es.iter().enumerate() {
            sum = sum.add(e).expect("shapes");
            equivariant &= m.is_equivariant(m, e);
            for (j, e2) in es.iter().enumerate() {
                let prod = e.matmul(e2).expect("shapes");
                let want = if i == j { e.clone() } else { ExactMatrix::zeros(f.clone(), n, n) };
                orthogonal &= prod == want;
            }
        }
        checks.push(Check::new("idempotents orthogonal", orthogonal));
        checks.push(Check::new("idempotents equivariant", equivariant));
        checks.push(Check::new("idempotents sum to identity", sum == ExactMatrix::identity(f, n)));
        checks
    }

    pub fn report(&self) -> DecompositionReport {
        let mut summands = Vec::new();
        for (class, mult) in self.multiplicities() {
            let first = self.classes.iter().position(|&c| c == class).unwrap();
            let p = &self.pieces[first];
            summands.push(SummandEntry {
                dim: p.module.dim(),
                generators: p.module.num_generators(),
                socle_dim: p.module.socle().len(),
                multiplicity: mult,
                proven_indecomposable: p.proven_indecomposable,
            });
        }
        let checks = self.verify();
        DecompositionReport {
            label: self.module.label().to_string(),
            algebra_hash: self.module.algebra().hash().to_string(),
            field: self.module.field().spec().to_string(),
            seed: self.seed,
            trials: self.trials,
            exponent_cap: self.module.dim(),
            summands,
            idempotents: self.idempotents().iter().map(SparseMatrixRecord::from_matrix).collect(),
            verified: all_hold(&checks),
            checks,
            monte_carlo: self.pieces.iter().any(|p| !p.proven_indecomposable),
        }
    }
}

fn random_coords<F: Field>(f: &F, n: usize, rng: &mut ChaCha8Rng) -> SparseVec<F> {
    (0..n)
        .map(|k| (k, f.random(rng)))
        .filter(|(_, x)| !f.is_zero(x))
        .collect()
}

enum SplitResult<F: Field> {
    Split(Subspace<F>, Subspace<F>),
    /// Indecomposable for certain: simple socle, cyclic, or `End` of
    /// dimension one.
    Proven,
    NoSplit,
}

/// Looks for an endomorphism whose stable power is neither zero nor
/// invertible, and splits along its kernel and image.
fn try_split<F: Field>(x: &ActionModule<F>, p: u64, rng: &mut ChaCha8Rng, trials: usize) -> Result<SplitResult<F>, StructureError> {
    let n = x.dim();
    // every nonzero summand meets the socle, and End of a cyclic module is local
    if n <= 1 || x.num_generators() == 1 || x.socle().len() == 1 {
        return Ok(SplitResult::Proven);
    }
    let f = x.field().clone();
    let hom = hom_module(x, x)?;
    let dh = hom.kernel.dim();
    if dh <= 1 {
        return Ok(SplitResult::Proven);
    }
    for _ in 0..trials {
        let coords = random_coords(&f, dh, rng);
        let phi = Dense::from_exact(&hom.to_matrix(&coords));
        let v: Vec<F::Elem> = (0..n).map(|_| f.random(rng)).collect();
        let mu = phi.min_poly_on(v);
        let mut candidates = vec![phi.clone()];
        if let Some(lambda) = find_root(&f, p, &mu, rng) {
            if !f.is_zero(&lambda) {
                candidates.push(phi.shift(&lambda));
            }
        }
        for g in candidates {
            let s = g.stable_power();
            let r = s.rank();
            if r > 0 && r < n {
                let cols = s.columns();
                let ker = kernel_of_columns::<F, ()>(&f, n, &cols, None);
                let im = Subspace::from_rref(span_of::<F, ()>(&f, n, &cols, None));
                return Ok(SplitResult::Split(ker, im));
            }
        }
    }
    Ok(SplitResult::NoSplit)
}

/// Rows `lo..hi` of a matrix.
fn row_block<F: Field>(m: &ExactMatrix<F>, lo: usize, hi: usize) -> ExactMatrix<F> {
    let cols = m
        .columns()
        .iter()
        .map(|c| {
            c.iter()
                .filter(|(i, _)| (lo..hi).contains(i))
                .map(|(i, x)| (i - lo, x.clone()))
                .collect()
        })
        .collect();
    ExactMatrix::from_columns(m.field().clone(), hi - lo, cols)
}

/// Fitting decomposition driven by random endomorphisms (prime fields only).
pub fn decompose<F: Field>(m: &ActionModule<F>, seed: u64) -> Result<Decomposition<F>, StructureError> {
    decompose_with(m, seed, SPLIT_TRIALS)
}

pub fn decompose_with<F: Field>(
    m: &ActionModule<F>,
    seed: u64,
    trials: usize,
) -> Result<Decomposition<F>, StructureError> {
    let p = prime_of(m.field()).ok_or(StructureError::UnsupportedField("decompose"))?;
    if m.is_zero() {
        return Err(StructureError::ZeroModule);
    }
    let f = m.field().clone();
    let n = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stack: Vec<(ActionModule<F>, ExactMatrix<F>)> =
        vec![(m.clone(), ExactMatrix::identity(f.clone(), n))];
    let mut done: Vec<(ActionModule<F>, ExactMatrix<F>, bool)> = Vec::new();
    while let Some((x, emb)) = stack.pop() {
        match try_split(&x, p, &mut rng, trials)? {
            SplitResult::Split(ker, im) => {
                for sub in [im, ker] {
                    let child = x.restrict(&sub, x.label()).ungraded();
                    let e = emb.matmul(&sub.inclusion()).expect("shapes");
                    stack.push((child, e));
                }
            }
            SplitResult::Proven => done.push((x, emb, true)),
            SplitResult::NoSplit => done.push((x, emb, false)),
        }
    }
    // inclusion matrices side by side form a change of basis
    let mut cols = Vec::with_capacity(n);
    for (_, e, _) in &done {
        cols.extend(e.columns().iter().cloned());
    }
    let basis = ExactMatrix::from_columns(f.clone(), n, cols);
    let inv = basis
        .inverse()
        .ok_or_else(|| StructureError::Invariant("summands do not span".into()))?;
    let mut pieces = Vec::with_capacity(done.len());
    let mut offset = 0;
    for (k, (x, e, proven)) in done.into_iter().enumerate() {
        let d = x.dim();
        let projection = row_block(&inv, offset, offset + d);
        offset += d;
        let label = format!("{}[{k}]", m.label());
        pieces.push(Piece {
            module: x.with_label(label),
            inclusion: e,
            projection,
            proven_indecomposable: proven,
        });
    }
    let refs: Vec<&ActionModule<F>> = pieces.iter().map(|p| &p.module).collect();
    let (classes, _) = classify(&refs, &mut rng, ISO_TRIALS)?;
    Ok(Decomposition {
        module: m.clone(),
        pieces,
        classes,
        seed,
        trials,
    })
}

/// An isomorphism `X -> Y` found among random module maps.
pub fn find_isomorphism<F: Field>(
    x: &ActionModule<F>,
    y: &ActionModule<F>,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<Option<ExactMatrix<F>>, StructureError> {
    if x.dim() != y.dim() {
        return Ok(None);
    }
    if x.dim() == 0 {
        return Ok(Some(ExactMatrix::zeros(x.field().clone(), 0, 0)));
    }
    let hom = hom_module(x, y)?;
    let dh = hom.kernel.dim();
    if dh == 0 {
        return Ok(None);
    }
    let f = x.field();
    for _ in 0..trials {
        let phi = hom.to_matrix(&random_coords(f, dh, rng));
        if Dense::from_exact(&phi).rank() == x.dim() {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// Cheap isomorphism invariants: dimension, generator count, socle
/// dimension and Koszul profile.
fn signature<F: Field>(x: &ActionModule<F>) -> (usize, usize, usize, Vec<usize>) {
    (x.dim(), x.num_generators(), x.socle().len(), koszul_profile(x).h)
}

/// Groups modules into isomorphism classes; also returns, for each module,
/// an isomorphism from its class representative.
pub fn classify<F: Field>(
    mods: &[&ActionModule<F>],
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<(Vec<usize>, Vec<ExactMatrix<F>>), StructureError> {
    let mut reps: Vec<(usize, (usize, usize, usize, Vec<usize>))> = Vec::new();
    let mut classes = Vec::with_capacity(mods.len());
    let mut isos = Vec::with_capacity(mods.len());
    let mut by_sig: HashMap<(usize, usize, usize, Vec<usize>), Vec<usize>> = HashMap::new();
    for (i, x) in mods.iter().enumerate() {
        let sig = signature(x);
        let mut found = None;
        if let Some(cands) = by_sig.get(&sig) {
            for &c in cands {
                let rep = mods[reps[c].0];
                if let Some(phi) = find_isomorphism(rep, x, rng, trials)? {
                    found = Some((c, phi));
                    break;
                }
            }
        }
        match found {
            Some((c, phi)) => {
                classes.push(c);
                isos.push(phi);
            }
            None => {
                let c = reps.len();
                reps.push((i, sig.clone()));
                by_sig.entry(sig).or_default().push(c);
                classes.push(c);
                isos.push(ExactMatrix::identity(x.field().clone(), x.dim()));
            }
        }
    }
    Ok((classes, isos))
}

/// `A | B`? Proof-level refutations first, then the simple and free
/// special cases (any field), then decomposition matching (prime fields).
pub fn summand_test<F: Field>(
    a: &ActionModule<F>,
    b: &ActionModule<F>,
    seed: u64,
) -> Result<SummandCertificate<F>, StructureError> {
    a.same_algebra(b)?;
    let f = a.field().clone();
    if a.dim() > b.dim() {
        return Ok(certificate(a, b, "dimension", None, SummandOutcome::Refuted(Refutation::Dimension)));
    }
    if a.is_zero() {
        let outcome = SummandOutcome::Split {
            f: ExactMatrix::zeros(f.clone(), b.dim(), 0),
            g: ExactMatrix::zeros(f, 0, b.dim()),
        };
        return Ok(certificate(a, b, "zero", None, outcome));
    }
    let (sa, sb) = (signature(a), signature(b));
    let profile_fits = sa.3.iter().zip(&sb.3).all(|(x, y)| x <= y);
    if sa.1 > sb.1 || sa.2 > sb.2 || !profile_fits {
        return Ok(certificate(a, b, "invariants", None, SummandOutcome::Refuted(Refutation::Invariant)));
    }
    if a.dim() == 1 {
        // a one-dimensional module is k
        return Ok(certificate(a, b, "socle", None, simple_summand_test(b).outcome));
    }
    if let Some(cover) = free_cover(a) {
        let rank = a.num_generators();
        return Ok(match free_summand_maps(b, rank)? {
            Some((r, fm, gm)) if r == rank => {
                let cover_inv = cover.inverse().expect("cover is invertible");
                let fm = fm.matmul(&cover_inv).expect("shapes");
                let gm = cover.matmul(&gm).expect("shapes");
                certificate(a, b, "free", None, SummandOutcome::Split { f: fm, g: gm })
            }
            _ => certificate(a, b, "free", None, SummandOutcome::Refuted(Refutation::Invariant)),
        });
    }
    if prime_of(&f).is_none() {
        return Err(StructureError::UnsupportedField("summand_test"));
    }
    let da = decompose(a, seed)?;
    let db = decompose(b, seed.wrapping_add(1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    Ok(match match_decompositions(&da, &db, &mut rng)? {
        Some((fm, gm)) => certificate(a, b, "decomposition", Some(seed), SummandOutcome::Split { f: fm, g: gm }),
        None => certificate(
            a,
            b,
            "decomposition",
            Some(seed),
            SummandOutcome::Refuted(Refutation::DecompositionMismatch),
        ),
    })
}

/// Split maps `A -> B -> A` assembled from a matching of indecomposable
/// factors, or `None` when some factor of `A` has no partner in `B`.
#[allow(clippy::type_complexity)]
pub fn match_decompositions<F: Field>(
    da: &Decomposition<F>,
    db: &Decomposition<F>,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(ExactMatrix<F>, ExactMatrix<F>)>, StructureError> {
    let mut all: Vec<&ActionModule<F>> = da.pieces.iter().map(|p| &p.module).collect();
    all.extend(db.pieces.iter().map(|p| &p.module));
    let (classes, isos) = classify(&all, rng, ISO_TRIALS)?;
    let na = da.pieces.len();
    let mut used = vec![false; db.pieces.len()];
    let f = da.module.field().clone();
    let mut fm = ExactMatrix::zeros(f.clone(), db.module.dim(), da.module.dim());
    let mut gm = ExactMatrix::zeros(f, da.module.dim(), db.module.dim());
    for (i, pa) in da.pieces.iter().enumerate() {
        let Some(j) = (0..db.pieces.len()).find(|&j| !used[j] && classes[na + j] == classes[i]) else {
            return Ok(None);
        };
        used[j] = true;
        let pb = &db.pieces[j];
        // rep -> pa and rep -> pb give pa -> pb
        let to_a_inv = isos[i].inverse().expect("isomorphism");
        let phi = isos[na + j].matmul(&to_a_inv).expect("shapes");
        let phi_inv = phi.inverse().expect("isomorphism");
        let part_f = pb.inclusion.matmul(&phi).and_then(|m| m.matmul(&pa.projection)).expect("shapes");
        let part_g = pa.inclusion.matmul(&phi_inv).and_then(|m| m.matmul(&pb.projection)).expect("shapes");
        fm = fm.add(&part_f).expect("shapes");
        gm = gm.add(&part_g).expect("shapes");
    }
    Ok(Some((fm, gm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, parse_presentation};
    use crate::arith::PrimeField;
    use crate::modules::{direct_sum, free_module, maximal_ideal, residue_field, resolve};
    use std::sync::Arc;

    fn alg_p(text: &str) -> Arc<crate::algebra::FiniteLocalAlgebra<PrimeField>> {
        let p = parse_presentation(text).unwrap();
        Arc::new(build_algebra(&p, PrimeField::new(101).unwrap()).unwrap())
    }

    #[test]
    fn simple_summands() {
        let a = alg_p("vars x,y; rels x^2,x*y,y^2;");
        let m = maximal_ideal(&a);
        let c = simple_summand_test(&m);
        assert!(c.is_certificate());
        assert!(c.verify(&residue_field(&a), &m));
        let r = free_module(&a, 1);
        assert_eq!(simple_summand_test(&r).refutation(), Some(Refutation::SocleCriterion));
        let k = residue_field(&a);
        let s = direct_sum(&[&k, &r], "k+R").unwrap();
        let c = simple_summand_test(&s);
        assert!(c.is_certificate() && c.verify(&k, &s));
    }

    #[test]
    fn decompositions() {
        let a = alg_p("vars x,y; rels x^2,x*y,y^2;");
        let d = decompose(&maximal_ideal(&a), 7).unwrap();
        assert_eq!(d.multiplicities().len(), 1);
        assert_eq!(d.multiplicities()[0].1, 2);
        assert!(d.report().verified);

        let r2 = free_module(&a, 2);
        let d = decompose(&r2, 7).unwrap();
        assert_eq!(d.pieces.len(), 2);
        assert_eq!(d.multiplicities(), vec![(0, 2)]);
        assert!(all_hold(&d.verify()));

        let b = alg_p("vars x,y; rels x^2,y^2;");
        let res = resolve(&residue_field(&b), 4);
        for n in 0..=4 {
            let d = decompose(res.syzygy(n), 11).unwrap();
            assert_eq!(d.pieces.len(), 1, "syz_{n}");
        }
    }

    #[test]
    fn cyclic_and_simple_socle_pieces_are_proven() {
        let b = alg_p("vars x,y; rels x^2,y^2;");
        let d = decompose(&maximal_ideal(&b), 3).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert!(d.pieces[0].proven_indecomposable);
        let d = decompose(&free_module(&b, 1), 3).unwrap();
        assert!(d.pieces[0].proven_indecomposable);
    }

    #[test]
    fn summands_between_modules() {
        let a = alg_p("vars x,y; rels x^2,x*y,y^2;");
        let k = residue_field(&a);
        let m = maximal_ideal(&a);
        let r = free_module(&a, 1);
        let c = summand_test(&k, &m, 1).unwrap();
        assert!(c.is_certificate() && c.verify(&k, &m));
        assert_eq!(summand_test(&r, &k, 1).unwrap().refutation(), Some(Refutation::Dimension));
        let s = direct_sum(&[&m, &r], "m+R").unwrap();
        let c = summand_test(&r, &s, 1).unwrap();
        assert!(c.is_certificate() && c.verify(&r, &s));
        let c = summand_test(&m, &s, 1).unwrap();
        assert!(c.is_certificate() && c.verify(&m, &s), "{:?}", c.outcome);
        assert_eq!(free_rank(&s).unwrap(), 1);
        assert_eq!(free_rank(&m).unwrap(), 0);
    }
}
