//! The `report` command.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use syzygy_core::corpus::AnyAlgebra;
use syzygy_core::koszul::{
    verify_low_syzygy_profiles, verify_syzygy_profile_bounds, verify_top_koszul_homology,
    KoszulProfile,
};
use syzygy_core::modules::residue_field;
use syzygy_core::report::{Check, FormulaReport};
use syzygy_core::structure::{
    tachikawa_probe, verify_golod_decomposition, DecompositionMode, ExceptionalReport,
    GolodDecompositionReport, GolodReport, StarScanReport, TachikawaReport,
};
use syzygy_core::{with_algebra, Field};

use crate::analysis::{Analysis, Bounds};
use crate::filter::NAMES;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Ring file.
    pub ring: std::path::PathBuf,
    /// Betti numbers of k up to degree N.
    #[arg(long, value_name = "N")]
    pub betti: Option<usize>,
    #[arg(long)]
    pub koszul: bool,
    #[arg(long)]
    pub golod: bool,
    #[arg(long)]
    pub star_scan: bool,
    #[arg(long, value_name = "B", default_value_t = 3)]
    pub star_bound: usize,
    #[arg(long)]
    pub burch: bool,
    #[arg(long)]
    pub exceptional: bool,
    #[arg(long, value_name = "B", default_value_t = 4)]
    pub exceptional_bound: usize,
    #[arg(long)]
    pub tachikawa: bool,
    /// Compare syz_{e+1+s}(k) with the sum predicted for Golod rings.
    #[arg(long)]
    pub decomposition_verify: bool,
    /// Largest shift s for --decomposition-verify.
    #[arg(long, value_name = "S", default_value_t = 2)]
    pub max_shift: usize,
    /// Also build explicit isomorphisms for --decomposition-verify (prime fields).
    #[arg(long)]
    pub structural: bool,
    #[arg(long)]
    pub all: bool,
    /// Expected value, e.g. `golod=false` or `dim=13`; a mismatch exits with 2.
    #[arg(long, value_name = "KEY=VALUE")]
    pub expect: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulSection {
    pub ring: Vec<usize>,
    pub syzygies: Vec<KoszulProfile>,
    pub identities: Vec<FormulaReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReport {
    pub ring: String,
    pub field: String,
    pub algebra_hash: String,
    pub dim: usize,
    pub embedding_dim: usize,
    pub hilbert: Vec<usize>,
    pub precision: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub koszul: Option<KoszulSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golod: Option<GolodReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<StarScanReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burch: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptional: Option<ExceptionalReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tachikawa: Option<TachikawaReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<GolodDecompositionReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expectations: Vec<Check>,
}

impl RingReport {
    pub fn matches(&self) -> bool {
        self.expectations.iter().all(|c| c.holds)
    }
}

enum Expected {
    Verdict(String, bool),
    Dim(usize),
    EmbeddingDim(usize),
    Betti(Vec<usize>),
}

fn parse_expectation(s: &str) -> Result<Expected> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| anyhow!("expectation `{s}` is not KEY=VALUE"))?;
    let (key, value) = (key.trim(), value.trim());
    let number = || -> Result<usize> {
        value
            .parse()
            .map_err(|_| anyhow!("expectation `{s}`: `{value}` is not a number"))
    };
    Ok(match key {
        "dim" => Expected::Dim(number()?),
        "e" => Expected::EmbeddingDim(number()?),
        "betti" => Expected::Betti(
            value
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| anyhow!("bad Betti list `{value}`")))
                .collect::<Result<_>>()?,
        ),
        k if NAMES.contains(&k) => {
            let b = value
                .parse()
                .map_err(|_| anyhow!("expectation `{s}`: expected true or false"))?;
            Expected::Verdict(k.to_string(), b)
        }
        _ => bail!(
            "unknown expectation key `{key}` (known: dim, e, betti, {})",
            NAMES.join(", ")
        ),
    })
}

pub fn run(alg: &AnyAlgebra, args: &ReportArgs, precision: Option<usize>, seed: u64) -> Result<RingReport> {
    let expected: Vec<Expected> = args
        .expect
        .iter()
        .map(|s| parse_expectation(s))
        .collect::<Result<_>>()?;
    with_algebra!(alg, a => {
        let bounds = Bounds {
            precision: precision.unwrap_or(a.embedding_dim() + 6),
            star: args.star_bound,
            exceptional: args.exceptional_bound,
            seed,
        };
        build(Analysis::new(a, bounds), args, &expected)
    })
}

fn build<F: Field>(mut an: Analysis<F>, args: &ReportArgs, expected: &[Expected]) -> Result<RingReport> {
    let a = an.algebra().clone();
    let b = an.bounds;
    let e = a.embedding_dim();
    let all = args.all;
    let mut r = RingReport {
        ring: a.presentation().to_text(),
        field: a.field().spec().to_string(),
        algebra_hash: a.hash().to_string(),
        dim: a.dim(),
        embedding_dim: e,
        hilbert: a.hilbert().to_vec(),
        precision: b.precision,
        seed: b.seed,
        betti: None,
        koszul: None,
        golod: None,
        star: None,
        burch: None,
        exceptional: None,
        tachikawa: None,
        decomposition: None,
        expectations: Vec::new(),
    };
    let betti_depth = args.betti.or(all.then_some(b.precision));
    if let Some(n) = betti_depth {
        r.betti = Some(an.tower.betti_upto(n));
    }
    if args.koszul || all {
        let depth = betti_depth.unwrap_or(e + 1).min(b.precision);
        let syzygies = (0..=depth as i64).map(|n| an.tower.profile(n)).collect();
        let identities = vec![
            verify_syzygy_profile_bounds(&residue_field(&a), depth),
            verify_low_syzygy_profiles(&a),
            verify_top_koszul_homology(&a, depth),
        ];
        r.koszul = Some(KoszulSection {
            ring: an.tower.ring_profile().h.clone(),
            syzygies,
            identities,
        });
    }
    if args.golod || all {
        r.golod = Some(an.golod()?.clone());
    }
    if args.star_scan || all {
        r.star = Some(an.star()?.clone());
    }
    if args.burch || all {
        r.burch = an.verdict("burch")?;
    }
    if args.exceptional || all {
        r.exceptional = Some(an.exceptional().clone());
    }
    if args.tachikawa || all {
        r.tachikawa = Some(tachikawa_probe(&a, b.precision, an.known_star()));
    }
    if args.decomposition_verify || all {
        let mode = if args.structural {
            DecompositionMode::Structural { max_dim: 200 }
        } else {
            DecompositionMode::Numeric
        };
        r.decomposition = Some(verify_golod_decomposition(
            &mut an.tower,
            args.max_shift,
            b.precision,
            mode,
            b.seed,
        )?);
    }
    for x in expected {
        let check = match x {
            Expected::Dim(d) => {
                Check::with_detail(format!("dim = {d}"), a.dim() == *d, format!("dim {}", a.dim()))
            }
            Expected::EmbeddingDim(d) => {
                Check::with_detail(format!("e = {d}"), e == *d, format!("e {e}"))
            }
            Expected::Betti(want) => {
                let got = an.tower.betti_upto(want.len().saturating_sub(1));
                Check::with_detail(
                    format!("betti = {want:?}"),
                    got[..want.len()] == want[..],
                    format!("betti {got:?}"),
                )
            }
            Expected::Verdict(name, want) => {
                let got = an.verdict(name)?;
                let detail = match got {
                    Some(v) => v.to_string(),
                    None => "undecided over this field".to_string(),
                };
                Check::with_detail(format!("{name} = {want}"), got == Some(*want), detail)
            }
        };
        r.expectations.push(check);
    }
    Ok(r)
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn render(r: &RingReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ring       {}", r.ring);
    let _ = writeln!(s, "hash       {}", r.algebra_hash);
    let _ = writeln!(s, "dim        {}  (e = {}, hilbert {})", r.dim, r.embedding_dim, join(&r.hilbert));
    let _ = writeln!(s, "precision  {}  seed {}", r.precision, r.seed);
    if let Some(b) = &r.betti {
        let _ = writeln!(s, "\nBetti numbers of k");
        let _ = writeln!(s, "  n     {}", (0..b.len()).map(|n| format!("{n:>6}")).collect::<String>());
        let _ = writeln!(s, "  beta  {}", b.iter().map(|x| format!("{x:>6}")).collect::<String>());
    }
    if let Some(k) = &r.koszul {
        let _ = writeln!(s, "\nKoszul homology dimensions h_0..h_e");
        let _ = writeln!(s, "  R         {}", join(&k.ring));
        for (n, p) in k.syzygies.iter().enumerate() {
            let _ = writeln!(s, "  syz_{n:<5} {}", join(&p.h));
        }
        for f in &k.identities {
            let _ = writeln!(s, "  {:<24} {}", f.name, if f.passed { "ok" } else { "FAILED" });
            for c in f.failures() {
                let _ = writeln!(s, "    {} ({})", c.name, c.detail);
            }
        }
    }
    if let Some(g) = &r.golod {
        let _ = writeln!(s, "\nGolod to degree {}: {:?}", g.precision, g.verdict);
        let _ = writeln!(s, "  betti   {}", join(&g.betti));
        let _ = writeln!(s, "  bound   {}", join(&g.bounds));
        let _ = writeln!(s, "  slack   {}", join(&g.slacks));
    }
    if let Some(st) = &r.star {
        let pairs: Vec<String> = st
            .pairs
            .iter()
            .map(|p| format!("({},{}) by {}", p.a, p.b, p.method))
            .collect();
        let _ = writeln!(s, "\n(*) pairs a < b <= {}: {}", st.bound, if pairs.is_empty() { "none".into() } else { pairs.join(", ") });
        if !st.undecided.is_empty() {
            let _ = writeln!(s, "  undecided {:?}", st.undecided);
        }
        if st.monte_carlo {
            let _ = writeln!(s, "  some refutations rest on random search");
        }
    }
    if let Some(b) = r.burch {
        let _ = writeln!(s, "\nBurch (k | syz_2 k): {}", flag(b));
    }
    if let Some(x) = &r.exceptional {
        let _ = writeln!(
            s,
            "\nexceptional to {}: {}{}",
            x.bound,
            flag(x.exceptional),
            x.first_hit.map(|n| format!("  (k | syz_{n} k)")).unwrap_or_default()
        );
    }
    if let Some(t) = &r.tachikawa {
        let _ = writeln!(s, "\nExt^i(K_R, R), i = 1..: {}", join(&t.ext));
        let _ = writeln!(
            s,
            "  first nonzero {:?}, Gorenstein {}, hypersurface {}, K_R free {}, consistent {}",
            t.first_nonvanishing,
            flag(t.gorenstein),
            flag(t.hypersurface),
            flag(t.canonical_free),
            flag(t.consistent)
        );
    }
    if let Some(d) = &r.decomposition {
        let _ = writeln!(s, "\nGolod decomposition to degree {} ({:?})", d.precision, d.mode);
        for sh in &d.shifts {
            let _ = writeln!(
                s,
                "  s = {}: numeric {}, structural {} {}",
                sh.shift,
                flag(sh.numeric_holds),
                sh.structural_holds.map_or("-", flag),
                sh.structural_detail
            );
        }
        let _ = writeln!(
            s,
            "  numeric {}, structural {}, consistent with {:?}: {}",
            flag(d.numeric_holds),
            d.structural_holds.map_or("-", flag),
            d.golod_verdict,
            flag(d.consistent)
        );
    }
    if !r.expectations.is_empty() {
        let _ = writeln!(s, "\nexpectations");
        for c in &r.expectations {
            let _ = writeln!(s, "  {} {:<24} {}", if c.holds { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
    }
    s
}
