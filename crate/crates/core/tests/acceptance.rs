//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::Oracle;
use syzygy_core::algebra::{build_algebra, fibre_product, parse_presentation, FiniteLocalAlgebra};
use syzygy_core::corpus::{bundled_entry, check_entry, sample_corpus, ScanConfig};
use syzygy_core::koszul::{
    is_hypersurface, verify_low_syzygy_profiles, verify_syzygy_profile_bounds_from,
    verify_top_koszul_homology_from,
};
use syzygy_core::modules::{cyclic_quotient, maximal_ideal, residue_field};
use syzygy_core::structure::{
    bn_hml_table, decompose, exceptional_test, fibre_factor_check, golod_check, monotonicity_check,
    serre_bound_check, star_property_scan, tachikawa_probe, verify_golod_decomposition,
    DecompositionMode, GolodVerdict, SyzygyTower,
};
use syzygy_core::{Field, FieldSpec, PrimeField, SparseVec};

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    summary: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new(failures: Vec<String>, summary: String) -> Self {
        Outcome {
            pass: failures.is_empty(),
            summary,
            failures,
        }
    }
}

fn fp(text: &str) -> Arc<FiniteLocalAlgebra<PrimeField>> {
    let p = parse_presentation(text).unwrap();
    Arc::new(build_algebra(&p, PrimeField::new(101).unwrap()).unwrap())
}

fn corpus_config() -> ScanConfig {
    ScanConfig {
        field: "F 101".into(),
        e: 3,
        vary_e: true,
        max_degree: 4,
        generators: (0, 4),
        samples: 200,
        seed: SEED,
        max_dim: 20,
        checks: Vec::new(),
        precision: None,
        max_socle_degree: None,
    }
}

fn corpus() -> Vec<Arc<FiniteLocalAlgebra<PrimeField>>> {
    sample_corpus(&corpus_config())
        .unwrap()
        .iter()
        .map(|p| Arc::new(build_algebra(p, PrimeField::new(101).unwrap()).unwrap()))
        .collect()
}

fn example_rings() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    for id in ["r1", "r2", "r3"] {
        let entry = bundled_entry(id).unwrap();
        for field in [FieldSpec::Rationals, FieldSpec::PrimeField(101)] {
            match check_entry(&entry, Some(field), SEED) {
                Ok(r) => {
                    checks += r.checks.len();
                    for c in r.checks.iter().filter(|c| !c.holds) {
                        failures.push(format!("{id} over {field}: {} ({})", c.name, c.detail));
                    }
                }
                Err(e) => failures.push(format!("{id} over {field}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}, limit 60 s"));
    }
    Outcome::new(failures, format!("{checks} checks over Q and F_101 in {elapsed:.1?}"))
}

fn golod_detection() -> Outcome {
    let mut failures = Vec::new();
    let sq = fp("vars x,y; rels x^2,x*y,y^2;");
    let ci = fp("vars x,y; rels x^2,y^2;");
    let mut t = SyzygyTower::new(&sq);
    let g = golod_check(&mut t, 8).unwrap();
    if g.verdict != GolodVerdict::GolodToPrecision || g.slacks.iter().any(|&s| s != 0) {
        failures.push(format!("(x,y)^2: {:?} slacks {:?}", g.verdict, g.slacks));
    }
    let mut t = SyzygyTower::new(&ci);
    let g = golod_check(&mut t, 8).unwrap();
    if g.verdict != GolodVerdict::NotGolod(3) || g.slacks[3] != 1 {
        failures.push(format!("(x^2,y^2): {:?} slacks {:?}", g.verdict, g.slacks));
    }
    for (name, a) in [("(x,y)^2", &sq), ("(x^2,y^2)", &ci)] {
        let (_, oracle) = Oracle::new(a.presentation()).syzygies_of_k(8);
        let ours = SyzygyTower::new(a).betti_upto(8);
        if ours != oracle {
            failures.push(format!("{name}: betti {ours:?} vs oracle {oracle:?}"));
        }
    }
    Outcome::new(failures, "verdicts, slacks and Betti tables to degree 8".into())
}

fn golod_round_trip(corpus: &[Arc<FiniteLocalAlgebra<PrimeField>>]) -> Outcome {
    let start = Instant::now();
    let rows: Vec<(bool, bool, Option<bool>, String)> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let e = a.embedding_dim();
            let mut t = SyzygyTower::new(a);
            let golod = golod_check(&mut t, e + 4).unwrap().is_golod();
            let numeric =
                verify_golod_decomposition(&mut t, 2, e + 4, DecompositionMode::Numeric, SEED)
                    .unwrap();
            let structural = if golod && e >= 2 {
                let r = verify_golod_decomposition(
                    &mut t,
                    0,
                    e + 4,
                    DecompositionMode::Structural { max_dim: 200 },
                    SEED + i as u64,
                )
                .unwrap();
                r.shifts.first().and_then(|s| {
                    s.structural_holds.map(|h| h && s.isomorphism.is_some())
                })
            } else {
                None
            };
            (golod, numeric.numeric_holds, structural, a.presentation().to_text())
        })
        .collect();
    let mut failures: Vec<String> = rows
        .iter()
        .filter(|r| r.0 != r.1)
        .map(|r| format!("{}: golod {} numeric {}", r.3, r.0, r.1))
        .collect();
    failures.extend(
        rows.iter()
            .filter(|r| r.2 == Some(false))
            .map(|r| format!("{}: structural isomorphism not found", r.3)),
    );
    let golod = rows.iter().filter(|r| r.0).count();
    let certified = rows.iter().filter(|r| r.2 == Some(true)).count();
    if certified < 10 {
        failures.push(format!("only {certified} structural certificates"));
    }
    Outcome::new(
        failures,
        format!(
            "{} samples, {golod} Golod, {certified} structural isomorphisms in {:.1?}",
            rows.len(),
            start.elapsed()
        ),
    )
}

fn formula_suite(corpus: &[Arc<FiniteLocalAlgebra<PrimeField>>]) -> Outcome {
    let failures: Vec<String> = corpus
        .par_iter()
        .flat_map_iter(|a| {
            let e = a.embedding_dim();
            let mut t = SyzygyTower::new(a);
            let mut out = Vec::new();
            let name = a.presentation().to_text();
            if let Err(err) = serre_bound_check(&mut t, 4) {
                out.push(format!("{name}: {err}"));
            }
            let mut res = t.resolution(4).clone();
            let reports = [
                verify_syzygy_profile_bounds_from(&mut res, 4),
                verify_low_syzygy_profiles(a),
                verify_top_koszul_homology_from(&mut res, 4),
            ];
            for r in reports {
                out.extend(r.failures().map(|c| format!("{name}: {} {}", r.name, c.name)));
            }
            let table = bn_hml_table(&mut t, 4, 4usize.saturating_sub(e + 1));
            out.extend(
                table
                    .checks
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| format!("{name}: {} ({})", c.name, c.detail)),
            );
            out
        })
        .collect();
    Outcome::new(failures, format!("{} samples to degree 4", corpus.len()))
}

/// Certified `(*)` pair with the smallest `b`, if any.
fn star_pairs(
    corpus: &[Arc<FiniteLocalAlgebra<PrimeField>>],
) -> Vec<Option<(usize, usize)>> {
    corpus
        .par_iter()
        .map(|a| {
            let mut t = SyzygyTower::new(a);
            let r = star_property_scan(&mut t, 3, SEED).unwrap();
            r.pairs.iter().map(|p| (p.a, p.b)).min_by_key(|&(a, b)| (b, a))
        })
        .collect()
}

fn random_cyclic<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>, seed: u64) -> syzygy_core::modules::ActionModule<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = a.field();
    let n = rng.gen_range(1..=2);
    let elems: Vec<SparseVec<F>> = (0..n)
        .map(|_| {
            let mut v: SparseVec<F> = Vec::new();
            for i in 1..a.dim() {
                let x = f.random(&mut rng);
                if rng.gen_bool(0.5) && !f.is_zero(&x) {
                    v.push((i, x));
                }
            }
            if v.is_empty() {
                v.push((a.dim() - 1, f.one()));
            }
            v
        })
        .collect();
    cyclic_quotient(a, &elems, "R/I")
}

fn monotonicity(
    corpus: &[Arc<FiniteLocalAlgebra<PrimeField>>],
    pairs: &[Option<(usize, usize)>],
) -> Outcome {
    let jobs: Vec<(usize, (usize, usize))> = pairs
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.map(|p| (i, p)))
        .collect();
    let results: Vec<(usize, Vec<String>)> = jobs
        .par_iter()
        .map(|&(i, (lo, hi))| {
            let a = &corpus[i];
            let mut t = SyzygyTower::new(a);
            // b + p gives every residue class mod p at least one check
            let bound = (hi + (hi - lo)).max(6);
            let modules = [
                residue_field(a),
                maximal_ideal(a),
                random_cyclic(a, SEED + i as u64),
            ];
            let mut out = Vec::new();
            let mut count = 0;
            for m in &modules {
                match monotonicity_check(&mut t, m, lo, hi, bound, SEED) {
                    Ok(r) => {
                        count += r.checks.len();
                        out.extend(r.checks.iter().filter(|c| !c.holds).map(|c| {
                            format!("{} M={}: {} ({})", a.presentation().to_text(), m.label(), c.name, c.detail)
                        }));
                    }
                    Err(e) => out.push(format!("{}: {e}", a.presentation().to_text())),
                }
            }
            (count, out)
        })
        .collect();
    let checks: usize = results.iter().map(|r| r.0).sum();
    let failures = results.into_iter().flat_map(|r| r.1).collect();
    Outcome::new(
        failures,
        format!("{} samples with a (*) pair, 3 modules each, {checks} checks", jobs.len()),
    )
}

fn tachikawa(
    corpus: &[Arc<FiniteLocalAlgebra<PrimeField>>],
    pairs: &[Option<(usize, usize)>],
) -> Outcome {
    let rows: Vec<(bool, bool, Option<String>)> = corpus
        .par_iter()
        .zip(pairs)
        .map(|(a, p)| {
            let e = a.embedding_dim();
            let star = p.is_some();
            let hyper = is_hypersurface(a);
            let gor = a.is_gorenstein();
            if !(star && !hyper) && !gor {
                return (false, false, None);
            }
            let r = tachikawa_probe(a, e + 6, Some(star));
            let name = a.presentation().to_text();
            let failure = if star && !hyper && r.first_nonvanishing.is_none() {
                Some(format!("{name}: no nonzero Ext^i(K_R, R) for i <= {}", e + 6))
            } else if gor && (r.first_nonvanishing.is_some() || !r.canonical_free) {
                Some(format!("{name}: Gorenstein but Ext {:?}", r.ext))
            } else {
                None
            };
            (star && !hyper, gor, failure)
        })
        .collect();
    let witnesses = rows.iter().filter(|r| r.0).count();
    let gorenstein = rows.iter().filter(|r| r.1).count();
    let failures = rows.into_iter().filter_map(|r| r.2).collect();
    Outcome::new(
        failures,
        format!("{witnesses} (*) non-hypersurfaces, {gorenstein} Gorenstein samples"),
    )
}

fn fibre_products() -> Outcome {
    let cfg = ScanConfig {
        field: "F 101".into(),
        e: 2,
        vary_e: true,
        max_degree: 3,
        generators: (0, 2),
        samples: 40,
        seed: SEED ^ 0xf1b4e,
        max_dim: 6,
        checks: Vec::new(),
        precision: None,
        max_socle_degree: None,
    };
    let factors: Vec<_> = sample_corpus(&cfg)
        .unwrap()
        .iter()
        .map(|p| Arc::new(build_algebra(p, PrimeField::new(101).unwrap()).unwrap()))
        .collect();
    let results: Vec<(bool, Vec<String>)> = factors
        .par_chunks(2)
        .enumerate()
        .map(|(i, pair)| {
            let (s, t) = (&pair[0], &pair[1]);
            let r = Arc::new(fibre_product(s, t).unwrap());
            let name = r.presentation().to_text();
            let mut out = Vec::new();
            let seed = SEED + i as u64;
            let rep = fibre_factor_check(s, t, &r, seed).unwrap();
            out.extend(
                rep.checks
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| format!("{name}: {} {}", c.name, c.detail)),
            );
            let mut tr = SyzygyTower::new(&r);
            if !star_property_scan(&mut tr, 2, seed).unwrap().contains(1, 2) {
                out.push(format!("{name}: (1,2) not certified"));
            }
            let ex = |a: &Arc<FiniteLocalAlgebra<PrimeField>>| {
                exceptional_test(&mut SyzygyTower::new(a), 4).exceptional
            };
            let (er, es, et) = (exceptional_test(&mut tr, 4).exceptional, ex(s), ex(t));
            if er != (es && et) {
                out.push(format!("{name}: exceptional R={er} S={es} T={et}"));
            }
            (er, out)
        })
        .collect();
    let exceptional = results.iter().filter(|r| r.0).count();
    let n = results.len();
    let failures = results.into_iter().flat_map(|r| r.1).collect();
    Outcome::new(failures, format!("{n} factor pairs, {exceptional} exceptional products"))
}

fn gorenstein_contrast() -> Outcome {
    let a = fp("vars x,y; rels x^2,y^2;");
    let mut t = SyzygyTower::new(&a);
    let mut failures = Vec::new();
    for n in 0..=4 {
        let d = decompose(t.syzygy(n), SEED + n as u64).unwrap();
        if d.num_indecomposables() != 1 || d.verify().iter().any(|c| !c.holds) {
            failures.push(format!("syz_{n}: {} pieces", d.num_indecomposables()));
        }
    }
    let s = star_property_scan(&mut t, 4, SEED).unwrap();
    if !s.pairs.is_empty() {
        failures.push(format!("pairs {:?}", s.pairs));
    }
    Outcome::new(
        failures,
        format!("syz_0..4 indecomposable, no (*) pair to 4, seed {SEED}"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = corpus();
    let pairs = star_pairs(&corpus);
    eprintln!("corpus and star scan ready in {:.1?}", start.elapsed());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("example rings r1-r3", Box::new(example_rings)),
        ("Golod detection", Box::new(golod_detection)),
        ("Golod decomposition round trip", Box::new(|| golod_round_trip(&corpus))),
        ("formula suite", Box::new(|| formula_suite(&corpus))),
        ("monotonicity", Box::new(|| monotonicity(&corpus, &pairs))),
        ("Ext(K_R, R) probe", Box::new(|| tachikawa(&corpus, &pairs))),
        ("fibre products", Box::new(fibre_products)),
        ("Gorenstein contrast", Box::new(gorenstein_contrast)),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "{} [{}] {name}: {} ({:.1?})",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.summary,
            t0.elapsed()
        );
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
        if o.failures.len() > 10 {
            println!("    ... {} more", o.failures.len() - 10);
        }
    }
    println!("acceptance finished in {:.1?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
