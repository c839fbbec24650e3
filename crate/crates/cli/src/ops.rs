//! `reproduce-paper`, `decompose`, `summand` and `fibre-product`.

use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{bail, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use syzygy_core::algebra::{fibre_product, FiniteLocalAlgebra};
use syzygy_core::corpus::{bundled, check_entry, AnyAlgebra, CorpusEntry, EntryResult};
use syzygy_core::modules::{canonical_module, free_module, maximal_ideal, residue_field, ActionModule};
use syzygy_core::structure::{
    decompose, fibre_factor_check, summand_test, DecompositionReport, FibreReport, SummandRecord,
    SyzygyTower,
};
use syzygy_core::{with_algebra, Field, FieldSpec};

/// Runs every bundled entry over its own field, and over `F_101` as well
/// for entries over `Q`, unless `field` pins a single field.
pub fn reproduce(field: Option<FieldSpec>, seed: u64) -> Result<Vec<(CorpusEntry, EntryResult)>> {
    let mut jobs: Vec<(CorpusEntry, Option<FieldSpec>)> = Vec::new();
    for e in bundled() {
        match field {
            Some(f) => jobs.push((e, Some(f))),
            None => {
                let own = AnyAlgebra::parse(&e.presentation)?.field();
                jobs.push((e.clone(), None));
                if own == FieldSpec::Rationals {
                    jobs.push((e, Some(FieldSpec::PrimeField(101))));
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(e, f)| {
            let r = check_entry(&e, f, seed)?;
            Ok((e, r))
        })
        .collect()
}

pub fn render_reproduction(rows: &[(CorpusEntry, EntryResult)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<8} {:<6} {:<6} {:<36} detail", "entry", "field", "result", "check");
    for (e, r) in rows {
        for c in &r.checks {
            let _ = writeln!(
                s,
                "{:<8} {:<6} {:<6} {:<36} {}",
                e.id,
                r.field,
                if c.holds { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        for x in &r.skipped {
            let _ = writeln!(s, "{:<8} {:<6} {:<6} {:<36} needs a prime field", e.id, r.field, "skip", x);
        }
    }
    let failed: Vec<&str> = rows
        .iter()
        .filter(|(_, r)| !r.passed())
        .map(|(e, _)| e.id.as_str())
        .collect();
    if failed.is_empty() {
        let _ = writeln!(s, "\nall {} runs match", rows.len());
    } else {
        let _ = writeln!(s, "\nmismatches: {}", failed.join(", "));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModuleName {
    /// The residue field.
    K,
    /// The maximal ideal.
    M,
    /// The ring itself.
    R,
    /// The canonical module.
    Canonical,
}

fn named_module<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>, m: ModuleName) -> ActionModule<F> {
    match m {
        ModuleName::K => residue_field(a),
        ModuleName::M => maximal_ideal(a),
        ModuleName::R => free_module(a, 1),
        ModuleName::Canonical => canonical_module(a),
    }
}

pub fn decompose_module(
    alg: &AnyAlgebra,
    syzygy: Option<usize>,
    module: ModuleName,
    seed: u64,
) -> Result<DecompositionReport> {
    with_algebra!(alg, a => {
        let m = match syzygy {
            Some(n) => SyzygyTower::new(a).syzygy(n).clone(),
            None => named_module(a, module),
        };
        Ok(decompose(&m, seed)?.report())
    })
}

pub fn render_decomposition(d: &DecompositionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} over {} (hash {}), seed {}", d.label, d.field, d.algebra_hash, d.seed);
    let _ = writeln!(s, "{:>6} {:>6} {:>6} {:>6}  indecomposable", "dim", "gens", "socle", "mult");
    for e in &d.summands {
        let _ = writeln!(
            s,
            "{:>6} {:>6} {:>6} {:>6}  {}",
            e.dim,
            e.generators,
            e.socle_dim,
            e.multiplicity,
            if e.proven_indecomposable { "proven" } else { "by random search" }
        );
    }
    let _ = writeln!(s, "idempotents verified: {}", if d.verified { "yes" } else { "NO" });
    for c in d.checks.iter().filter(|c| !c.holds) {
        let _ = writeln!(s, "  failed: {} {}", c.name, c.detail);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandReport {
    #[serde(flatten)]
    pub record: SummandRecord,
    /// The split maps were checked to compose to the identity.
    pub verified: bool,
}

pub fn summand(alg: &AnyAlgebra, a: usize, b: usize, seed: u64) -> Result<SummandReport> {
    with_algebra!(alg, r => {
        let mut t = SyzygyTower::new(r);
        let (sa, sb) = (t.syzygy(a).clone(), t.syzygy(b).clone());
        let cert = summand_test(&sa, &sb, seed)?;
        Ok(SummandReport {
            record: cert.record(),
            verified: cert.verify(&sa, &sb),
        })
    })
}

pub fn render_summand(r: &SummandReport, a: usize, b: usize) -> String {
    let rec = &r.record;
    let mut s = format!(
        "syz_{a}(k) {} a direct summand of syz_{b}(k)  (method {}",
        if rec.is_summand { "is" } else { "is not" },
        rec.method
    );
    if let Some(x) = &rec.refutation {
        let _ = write!(s, ", refuted by {x:?}");
    }
    if let Some(seed) = rec.seed {
        let _ = write!(s, ", seed {seed}");
    }
    s.push_str(")\n");
    if rec.is_summand {
        let _ = writeln!(s, "split maps verified: {}", if r.verified { "yes" } else { "NO" });
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreProduct {
    pub ring: String,
    pub algebra_hash: String,
    pub dim: usize,
    /// `None` over `Q`.
    pub factor_check: Option<FibreReport>,
}

pub fn render_fibre(p: &FibreProduct) -> String {
    let checks = match &p.factor_check {
        Some(c) if c.passed => "passed",
        Some(_) => "FAILED",
        None => "skipped (needs a prime field)",
    };
    format!("dim {} (hash {}), factor checks {checks}", p.dim, p.algebra_hash)
}

/// The factor check runs only over prime fields, where summands can be
/// certified.
pub fn fibre(s: &AnyAlgebra, t: &AnyAlgebra, seed: u64) -> Result<(AnyAlgebra, Option<FibreReport>)> {
    fn go<F: Field>(
        s: &Arc<FiniteLocalAlgebra<F>>,
        t: &Arc<FiniteLocalAlgebra<F>>,
        seed: u64,
    ) -> Result<(Arc<FiniteLocalAlgebra<F>>, Option<FibreReport>)> {
        let r = Arc::new(fibre_product(s, t)?);
        let report = match r.field().spec() {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(_) => Some(fibre_factor_check(s, t, &r, seed)?),
        };
        Ok((r, report))
    }
    Ok(match (s, t) {
        (AnyAlgebra::Rationals(s), AnyAlgebra::Rationals(t)) => {
            let (r, rep) = go(s, t, seed)?;
            (AnyAlgebra::Rationals(r), rep)
        }
        (AnyAlgebra::Prime(s), AnyAlgebra::Prime(t)) => {
            let (r, rep) = go(s, t, seed)?;
            (AnyAlgebra::Prime(r), rep)
        }
        _ => bail!("factors are over different fields ({} and {})", s.field(), t.field()),
    })
}
