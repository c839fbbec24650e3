mod analysis;
mod filter;
mod ops;
mod report;
mod scan;

use std::fs::File;
use std::io::{self, BufWriter, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use syzygy_core::algebra::parse_presentation;
use syzygy_core::corpus::AnyAlgebra;
use syzygy_core::FieldSpec;

/// Exact homological algebra over Artinian local rings.
#[derive(Debug, Parser)]
#[command(name = "syzygy", version)]
struct Cli {
    /// Coefficient field overriding the ring files: Q or F <prime>.
    #[arg(long, global = true, value_name = "FIELD")]
    field: Option<FieldSpec>,
    /// Depth of resolutions and Golod checks (default e + 6).
    #[arg(long, global = true, value_name = "N")]
    precision: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to a file instead of stdout.
    #[arg(short = 'o', long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyse one ring.
    Report(report::ReportArgs),
    /// Check the bundled example rings against their known answers.
    ReproducePaper,
    /// Sample random monomial algebras and stream one JSON record each.
    Scan(scan::ScanArgs),
    /// Split a module into indecomposable summands.
    Decompose {
        ring: PathBuf,
        /// Decompose syz_n(k).
        #[arg(long, value_name = "N", conflicts_with = "module")]
        syzygy: Option<usize>,
        #[arg(long, value_enum, default_value = "m")]
        module: ops::ModuleName,
    },
    /// Decide whether syz_a(k) is a direct summand of syz_b(k).
    Summand {
        ring: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        syzygy: Vec<usize>,
    },
    /// Build the fibre product S x_k T of two rings.
    FibreProduct { s: PathBuf, t: PathBuf },
}

enum Status {
    Ok,
    Mismatch,
}

fn load_ring(path: &Path, field: Option<FieldSpec>) -> Result<AnyAlgebra> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut p = parse_presentation(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(f) = field {
        p = p.over(f);
    }
    AnyAlgebra::build(&p).with_context(|| format!("building {}", path.display()))
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: Serialize>(cli: &Cli, value: &T, human: impl FnOnce(&T) -> String) -> Result<()> {
    let mut out = open_out(&cli.out)?;
    if cli.json {
        serde_json::to_writer_pretty(&mut out, value)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", human(value))?;
    }
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Status> {
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Report(args) => {
            let alg = load_ring(&args.ring, cli.field)?;
            let r = report::run(&alg, args, cli.precision, seed)?;
            emit(cli, &r, report::render)?;
            return Ok(if r.matches() { Status::Ok } else { Status::Mismatch });
        }
        Command::ReproducePaper => {
            let rows = ops::reproduce(cli.field, seed)?;
            let ok = rows.iter().all(|(_, r)| r.passed());
            let results: Vec<_> = rows.iter().map(|(_, r)| r).collect();
            let mut out = open_out(&cli.out)?;
            if cli.json {
                serde_json::to_writer_pretty(&mut out, &results)?;
                writeln!(out)?;
            } else {
                write!(out, "{}", ops::render_reproduction(&rows))?;
            }
            out.flush()?;
            return Ok(if ok { Status::Ok } else { Status::Mismatch });
        }
        Command::Scan(args) => {
            let cfg = scan::load_config(&args.config, cli.field, cli.precision, cli.seed)?;
            let mut out = open_out(&cli.out)?;
            let s = scan::run(&cfg, args, &mut out)?;
            out.flush()?;
            if io::stderr().is_terminal() {
                eprintln!("{} samples, {} records written, seed {}", s.records, s.emitted, cfg.seed);
            }
        }
        Command::Decompose { ring, syzygy, module } => {
            let alg = load_ring(ring, cli.field)?;
            let d = ops::decompose_module(&alg, *syzygy, *module, seed)?;
            emit(cli, &d, ops::render_decomposition)?;
        }
        Command::Summand { ring, syzygy } => {
            let alg = load_ring(ring, cli.field)?;
            let (a, b) = (syzygy[0], syzygy[1]);
            let r = ops::summand(&alg, a, b, seed)?;
            emit(cli, &r, |r| ops::render_summand(r, a, b))?;
        }
        Command::FibreProduct { s, t } => {
            let (rs, rt) = (load_ring(s, cli.field)?, load_ring(t, cli.field)?);
            let (r, factor_check) = ops::fibre(&rs, &rt, seed)?;
            let passed = factor_check.as_ref().is_none_or(|c| c.passed);
            let product = ops::FibreProduct {
                ring: r.presentation().to_text(),
                algebra_hash: r.hash(),
                dim: r.dim(),
                factor_check,
            };
            if let Some(path) = &cli.out {
                std::fs::write(path, format!("{}\n", product.ring))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&product)?);
            } else if cli.out.is_some() {
                println!("{}", ops::render_fibre(&product));
            } else {
                println!("{}", product.ring);
            }
            if !passed {
                return Ok(Status::Mismatch);
            }
        }
    }
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
