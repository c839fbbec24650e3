//! The `scan` command: random monomial algebras, one JSON record per line.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::PathBuf;
use std::sync::mpsc;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use syzygy_core::corpus::{sample_corpus, AnyAlgebra, ScanConfig};
use syzygy_core::{with_algebra, FieldSpec};

use crate::analysis::{Analysis, Bounds};
use crate::filter::{self, Expr, NAMES};

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// TOML scan configuration.
    pub config: PathBuf,
    /// Keep only records satisfying a boolean expression over verdicts,
    /// e.g. "star && !golod && !fibre".
    #[arg(long = "where", value_name = "EXPR")]
    pub filter: Option<String>,
    /// Emit records in sample order instead of completion order.
    #[arg(long)]
    pub ordered: bool,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    #[arg(long, value_name = "B", default_value_t = 3)]
    pub star_bound: usize,
    #[arg(long, value_name = "B", default_value_t = 4)]
    pub exceptional_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub index: usize,
    /// The scan seed; sample `index` is drawn from its own stream.
    pub seed: u64,
    pub ring: String,
    pub algebra_hash: String,
    pub dim: usize,
    pub embedding_dim: usize,
    pub precision: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    /// `null` marks a verdict that is undecided over the scan field.
    pub verdicts: BTreeMap<String, Option<bool>>,
    /// Certified `(*)` pairs when `star` was computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
}

/// Verdict names to compute, plus whether to record Betti numbers.
fn requested(cfg: &ScanConfig, filter: Option<&Expr>) -> Result<(Vec<String>, bool)> {
    let mut names: Vec<String> = Vec::new();
    let mut betti = cfg.checks.is_empty();
    if cfg.checks.is_empty() {
        names.extend(NAMES.iter().map(|s| s.to_string()));
    }
    for c in &cfg.checks {
        match c.as_str() {
            "betti" => betti = true,
            n if NAMES.contains(&n) => names.push(n.to_string()),
            _ => bail!("unknown check `{c}` (known: betti, {})", NAMES.join(", ")),
        }
    }
    if let Some(f) = filter {
        f.vars(&mut names);
    }
    names.sort_by_key(|n| NAMES.iter().position(|m| m == n));
    names.dedup();
    Ok((names, betti))
}

pub fn load_config(path: &PathBuf, field: Option<FieldSpec>, precision: Option<usize>, seed: Option<u64>) -> Result<ScanConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg: ScanConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(f) = field {
        cfg.field = f.to_string();
    }
    if precision.is_some() {
        cfg.precision = precision;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate().with_context(|| format!("invalid config {}", path.display()))?;
    Ok(cfg)
}

fn analyse(
    index: usize,
    text: &str,
    cfg: &ScanConfig,
    args: &ScanArgs,
    names: &[String],
    betti: bool,
) -> Result<ScanRecord> {
    let alg = AnyAlgebra::parse(text)?;
    with_algebra!(&alg, a => {
        let bounds = Bounds {
            precision: cfg.precision.unwrap_or(a.embedding_dim() + 6),
            star: args.star_bound,
            exceptional: args.exceptional_bound,
            seed: cfg.seed.wrapping_add(index as u64),
        };
        let mut an = Analysis::new(a, bounds);
        let mut verdicts = BTreeMap::new();
        for n in names {
            verdicts.insert(n.clone(), an.verdict(n)?);
        }
        let pairs = if names.iter().any(|n| n == "star") {
            Some(an.star()?.pairs.iter().map(|p| (p.a, p.b)).collect())
        } else {
            None
        };
        Ok(ScanRecord {
            index,
            seed: cfg.seed,
            ring: text.to_string(),
            algebra_hash: a.hash().to_string(),
            dim: a.dim(),
            embedding_dim: a.embedding_dim(),
            precision: bounds.precision,
            betti: betti.then(|| an.tower.betti_upto(bounds.precision)),
            verdicts,
            pairs,
        })
    })
}

pub struct Summary {
    pub records: usize,
    pub emitted: usize,
}

pub fn run(cfg: &ScanConfig, args: &ScanArgs, out: &mut dyn Write) -> Result<Summary> {
    let filter = args.filter.as_deref().map(filter::parse).transpose()?;
    let (names, betti) = requested(cfg, filter.as_ref())?;
    let texts: Vec<String> = sample_corpus(cfg)?.iter().map(|p| p.to_text()).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()?;
    let (tx, rx) = mpsc::channel::<(usize, Result<ScanRecord>)>();
    let mut summary = Summary {
        records: 0,
        emitted: 0,
    };
    std::thread::scope(|s| -> Result<()> {
        let (texts, names) = (&texts, &names);
        s.spawn(move || {
            pool.install(|| {
                texts.par_iter().enumerate().for_each_with(tx, |tx, (i, t)| {
                    let _ = tx.send((i, analyse(i, t, cfg, args, names, betti)));
                })
            })
        });
        let mut pending: HashMap<usize, ScanRecord> = HashMap::new();
        let mut next = 0;
        for (i, rec) in rx {
            let rec = rec.with_context(|| format!("sample {i}: {}", texts[i]))?;
            summary.records += 1;
            if !args.ordered {
                summary.emitted += emit(&rec, filter.as_ref(), out)?;
                continue;
            }
            pending.insert(i, rec);
            while let Some(r) = pending.remove(&next) {
                summary.emitted += emit(&r, filter.as_ref(), out)?;
                next += 1;
            }
        }
        Ok(())
    })?;
    Ok(summary)
}

fn emit(rec: &ScanRecord, filter: Option<&Expr>, out: &mut dyn Write) -> Result<usize> {
    if let Some(f) = filter {
        let lookup = |n: &str| rec.verdicts.get(n).copied().flatten();
        if f.eval(&lookup) != Some(true) {
            return Ok(0);
        }
    }
    serde_json::to_writer(&mut *out, rec)?;
    writeln!(out)?;
    Ok(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(checks: &[&str]) -> ScanConfig {
        ScanConfig {
            field: "F 101".into(),
            e: 2,
            vary_e: false,
            max_degree: 3,
            generators: (0, 2),
            samples: 6,
            seed: 5,
            max_dim: 9,
            checks: checks.iter().map(|s| s.to_string()).collect(),
            precision: Some(4),
            max_socle_degree: None,
        }
    }

    fn args(filter: Option<&str>, ordered: bool) -> ScanArgs {
        ScanArgs {
            config: PathBuf::new(),
            filter: filter.map(String::from),
            ordered,
            jobs: Some(2),
            star_bound: 2,
            exceptional_bound: 3,
        }
    }

    #[test]
    fn check_lists_and_filters_pick_verdicts() {
        let (names, betti) = requested(&config(&["burch", "golod"]), None).unwrap();
        assert_eq!(names, ["golod", "burch"]);
        assert!(!betti);
        let f = filter::parse("star || golod").unwrap();
        let (names, _) = requested(&config(&["golod"]), Some(&f)).unwrap();
        assert_eq!(names, ["golod", "star"]);
        assert!(requested(&config(&["nope"]), None).is_err());
    }

    #[test]
    fn ordered_stream_is_in_sample_order() {
        let mut out = Vec::new();
        let s = run(&config(&["golod", "gorenstein"]), &args(None, true), &mut out).unwrap();
        assert_eq!((s.records, s.emitted), (6, 6));
        let recs: Vec<ScanRecord> = String::from_utf8(out)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert!(recs.iter().enumerate().all(|(i, r)| r.index == i));
        assert!(recs.iter().all(|r| r.verdicts.len() == 2 && r.betti.is_none()));
    }
}
