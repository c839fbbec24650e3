//! Bundled example rings with their known answers, and a sampler of random
//! Artinian monomial algebras.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::poly::{divides, monomials_of_degree, total_degree};
use crate::algebra::{
    build_algebra, parse_presentation, AlgebraError, FiniteLocalAlgebra, Presentation,
};
use crate::arith::{Field, FieldSpec, PrimeField, Rationals};
use crate::report::Check;
use crate::structure::{
    exceptional_test, golod_check, simple_summand_split, star_property_scan, StructureError,
    SyzygyTower,
};

/// An algebra over either supported coefficient field.
#[derive(Clone)]
pub enum AnyAlgebra {
    Rationals(Arc<FiniteLocalAlgebra<Rationals>>),
    Prime(Arc<FiniteLocalAlgebra<PrimeField>>),
}

/// Runs `$body` with `$a` bound to the concrete `Arc<FiniteLocalAlgebra<_>>`.
#[macro_export]
macro_rules! with_algebra {
    ($any:expr, $a:ident => $body:expr) => {
        match $any {
            $crate::corpus::AnyAlgebra::Rationals($a) => $body,
            $crate::corpus::AnyAlgebra::Prime($a) => $body,
        }
    };
}

impl AnyAlgebra {
    pub fn build(p: &Presentation) -> Result<Self, AlgebraError> {
        Ok(match p.field {
            FieldSpec::Rationals => AnyAlgebra::Rationals(Arc::new(build_algebra(p, Rationals)?)),
            FieldSpec::PrimeField(q) => {
                AnyAlgebra::Prime(Arc::new(build_algebra(p, PrimeField::new(q)?)?))
            }
        })
    }

    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        Self::build(&parse_presentation(text)?)
    }

    pub fn field(&self) -> FieldSpec {
        with_algebra!(self, a => a.field().spec())
    }

    pub fn hash(&self) -> String {
        with_algebra!(self, a => a.hash().to_string())
    }

    pub fn dim(&self) -> usize {
        with_algebra!(self, a => a.dim())
    }

    pub fn embedding_dim(&self) -> usize {
        with_algebra!(self, a => a.embedding_dim())
    }

    pub fn presentation(&self) -> &Presentation {
        with_algebra!(self, a => a.presentation())
    }
}

/// A known answer attached to a corpus ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    Dim { dim: usize },
    /// `k` is (or is not) a direct summand of `syz_n(k)`.
    SimpleSummand { n: usize, holds: bool },
    Burch { holds: bool },
    Golod { precision: usize, holds: bool },
    Exceptional { bound: usize, holds: bool },
    /// `syz_a(k) | syz_b(k)`; needs a prime field when `a > 0`.
    StarPair { a: usize, b: usize },
}

impl Expectation {
    pub fn describe(&self) -> String {
        match self {
            Expectation::Dim { dim } => format!("dim R = {dim}"),
            Expectation::SimpleSummand { n, holds: true } => format!("k | syz_{n}(k)"),
            Expectation::SimpleSummand { n, holds: false } => format!("k does not divide syz_{n}(k)"),
            Expectation::Burch { holds } => format!("burch = {holds}"),
            Expectation::Golod { precision, holds } => format!("golod to {precision} = {holds}"),
            Expectation::Exceptional { bound, holds } => format!("exceptional to {bound} = {holds}"),
            Expectation::StarPair { a, b } => format!("syz_{a}(k) | syz_{b}(k)"),
        }
    }

    fn needs_prime_field(&self) -> bool {
        matches!(self, Expectation::StarPair { a, .. } if *a > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub presentation: String,
    pub provenance: String,
    pub expectations: Vec<Expectation>,
}

fn entry(id: &str, text: &str, provenance: &str, expectations: Vec<Expectation>) -> CorpusEntry {
    CorpusEntry {
        id: id.into(),
        presentation: text.into(),
        provenance: provenance.into(),
        expectations,
    }
}

/// The bundled rings. `r1`..`r4` are the published examples; the rest are
/// small rings with hand-checked answers.
pub fn bundled() -> Vec<CorpusEntry> {
    use Expectation::*;
    vec![
        entry(
            "r1",
            "field Q; vars x,y,z; rels x^3,y^3,z^3,x*y,x*z^2;",
            "published example: k splits off syz_3(k) but not syz_2(k); neither Golod nor a fibre product",
            vec![
                Dim { dim: 13 },
                SimpleSummand { n: 2, holds: false },
                SimpleSummand { n: 3, holds: true },
                Golod { precision: 6, holds: false },
                Exceptional { bound: 3, holds: false },
            ],
        ),
        entry(
            "r2",
            "field Q; vars x,y,z; rels x^3,y^3,z^3,x^2*y,y*z^2;",
            "published example: k splits off syz_4(k) but not syz_2(k) or syz_3(k)",
            vec![
                SimpleSummand { n: 2, holds: false },
                SimpleSummand { n: 3, holds: false },
                SimpleSummand { n: 4, holds: true },
            ],
        ),
        entry(
            "r3",
            "field Q; vars x,z; rels x^4,x^2*z^2,z^4;",
            "published example: k splits off syz_3(k) but not syz_2(k), so the ring is not Burch",
            vec![
                SimpleSummand { n: 2, holds: false },
                SimpleSummand { n: 3, holds: true },
                Burch { holds: false },
            ],
        ),
        entry(
            "r4",
            "field F 101; vars x,y,z,w; rels x^2,y^2,x*z,x*w,y*z,y*w,z^2,w^2;",
            "published example: fibre product of two copies of k[x,y]/(x^2,y^2); exceptional with syz_1(k) | syz_2(k)",
            vec![
                Dim { dim: 7 },
                StarPair { a: 1, b: 2 },
                Exceptional { bound: 4, holds: true },
            ],
        ),
        entry(
            "square",
            "field F 101; vars x,y; rels x^2,x*y,y^2;",
            "m^2 = 0: Golod, Burch, m is k^2",
            vec![
                Dim { dim: 3 },
                Golod { precision: 8, holds: true },
                Burch { holds: true },
                SimpleSummand { n: 1, holds: true },
                StarPair { a: 0, b: 1 },
                Exceptional { bound: 2, holds: false },
            ],
        ),
        entry(
            "ci",
            "field F 101; vars x,y; rels x^2,y^2;",
            "Gorenstein complete intersection: not Golod, not Burch, no summand relations",
            vec![
                Dim { dim: 4 },
                Golod { precision: 6, holds: false },
                Burch { holds: false },
                Exceptional { bound: 4, holds: true },
            ],
        ),
        entry(
            "hyper",
            "field F 101; vars x; rels x^2;",
            "hypersurface: Golod, periodic resolution, syz_1(k) = k",
            vec![
                Dim { dim: 2 },
                Golod { precision: 6, holds: true },
                StarPair { a: 0, b: 1 },
            ],
        ),
    ]
}

pub fn bundled_entry(id: &str) -> Option<CorpusEntry> {
    bundled().into_iter().find(|e| e.id == id)
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryResult {
    pub id: String,
    pub field: String,
    pub algebra_hash: String,
    pub checks: Vec<Check>,
    /// Expectations that cannot be decided over this field.
    pub skipped: Vec<String>,
}

impl EntryResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates every expectation of `e` over `field` (the entry's own field
/// when `None`).
pub fn check_entry(
    e: &CorpusEntry,
    field: Option<FieldSpec>,
    seed: u64,
) -> Result<EntryResult, CorpusError> {
    let mut p = parse_presentation(&e.presentation).map_err(AlgebraError::from)?;
    if let Some(f) = field {
        p = p.over(f);
    }
    let alg = AnyAlgebra::build(&p)?;
    with_algebra!(&alg, a => check_expectations(e, a, seed))
}

fn check_expectations<F: Field>(
    e: &CorpusEntry,
    a: &Arc<FiniteLocalAlgebra<F>>,
    seed: u64,
) -> Result<EntryResult, CorpusError> {
    let prime = !matches!(a.field().spec(), FieldSpec::Rationals);
    let mut t = SyzygyTower::new(a);
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for x in &e.expectations {
        if x.needs_prime_field() && !prime {
            skipped.push(x.describe());
            continue;
        }
        let (holds, detail) = match *x {
            Expectation::Dim { dim } => (a.dim() == dim, format!("dim {}", a.dim())),
            Expectation::SimpleSummand { n, holds } => {
                let got = simple_summand_split(t.syzygy(n)).is_some();
                (got == holds, format!("dim syz_{n} = {}, split {got}", t.syzygy(n).dim()))
            }
            Expectation::Burch { holds } => {
                let got = simple_summand_split(t.syzygy(2)).is_some();
                (got == holds, format!("burch {got}"))
            }
            Expectation::Golod { precision, holds } => {
                let r = golod_check(&mut t, precision)?;
                (r.is_golod() == holds, format!("{:?}", r.verdict))
            }
            Expectation::Exceptional { bound, holds } => {
                let r = exceptional_test(&mut t, bound);
                (r.exceptional == holds, format!("first hit {:?}", r.first_hit))
            }
            Expectation::StarPair { a: i, b: j } => {
                let r = star_property_scan(&mut t, j, seed)?;
                let pairs: Vec<(usize, usize)> = r.pairs.iter().map(|p| (p.a, p.b)).collect();
                (r.contains(i, j), format!("pairs {pairs:?}"))
            }
        };
        checks.push(Check::with_detail(x.describe(), holds, detail));
    }
    Ok(EntryResult {
        id: e.id.clone(),
        field: a.field().spec().to_string(),
        algebra_hash: a.hash().to_string(),
        checks,
        skipped,
    })
}

/// Parameters of the random monomial sampler.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default = "default_field")]
    pub field: String,
    /// Number of variables, or the largest number when `vary_e` is set.
    pub e: usize,
    #[serde(default)]
    pub vary_e: bool,
    /// Largest degree of a generator of the ideal.
    pub max_degree: u32,
    /// Range for the number of mixed generators besides the pure powers.
    #[serde(default = "default_generators")]
    pub generators: (usize, usize),
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Samples with a larger `dim R` are redrawn.
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub precision: Option<usize>,
    /// Samples whose top nonzero degree exceeds this are redrawn.
    #[serde(default)]
    pub max_socle_degree: Option<u32>,
}

fn default_field() -> String {
    "F 101".into()
}

fn default_generators() -> (usize, usize) {
    (0, 4)
}

fn default_max_dim() -> usize {
    20
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
}

impl ScanConfig {
    pub fn validate(&self) -> Result<FieldSpec, ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        let field: FieldSpec = self
            .field
            .parse()
            .map_err(|e| ConfigError::Invalid(format!("field: {e}")))?;
        field
            .validate()
            .map_err(|e| ConfigError::Invalid(format!("field: {e}")))?;
        if self.e == 0 || self.e > 26 {
            return bad("e must be in 1..=26");
        }
        if self.max_degree < 2 {
            return bad("max_degree must be at least 2");
        }
        if self.generators.0 > self.generators.1 {
            return bad("generators range is empty");
        }
        if self.samples == 0 || self.max_dim == 0 {
            return bad("samples and max_dim must be positive");
        }
        if self.precision == Some(0) {
            return bad("precision must be positive");
        }
        // the smallest algebra has every pure power x_i^2
        if self.max_dim < 1 << if self.vary_e { 1 } else { self.e.min(20) } {
            return bad("max_dim is below 2^e, no algebra fits");
        }
        // x_i^2 for every i has socle degree e
        if let Some(s) = self.max_socle_degree {
            if (s as usize) < if self.vary_e { 1 } else { self.e } {
                return bad("max_socle_degree is below e, no algebra fits");
            }
        }
        Ok(field)
    }
}

fn var_names(e: usize) -> Vec<String> {
    const SMALL: [&str; 4] = ["x", "y", "z", "w"];
    if e <= SMALL.len() {
        SMALL[..e].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=e).map(|i| format!("x{i}")).collect()
    }
}

fn monomial_text(exps: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(&d, _)| d > 0)
        .map(|(&d, n)| if d == 1 { n.clone() } else { format!("{n}^{d}") })
        .collect();
    parts.join("*")
}

/// Number of monomials outside the ideal, i.e. `dim R`, and the largest
/// degree among them, for a monomial ideal containing every `x_i^{d_i}`.
fn standard_count(powers: &[u32], gens: &[Vec<u32>]) -> (usize, u32) {
    let mut count = 0;
    let mut top = 0;
    let mut e = vec![0u32; powers.len()];
    loop {
        if !gens.iter().any(|g| divides(g, &e)) {
            count += 1;
            top = top.max(total_degree(&e));
        }
        let mut i = 0;
        loop {
            if i == e.len() {
                return (count, top);
            }
            e[i] += 1;
            if e[i] < powers[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// One random Artinian monomial presentation: a pure power of every
/// variable plus a random antichain of mixed monomials, redrawn until
/// `dim R <= max_dim` and the socle degree is within `max_socle_degree`.
pub fn sample_presentation<R: Rng>(cfg: &ScanConfig, field: FieldSpec, rng: &mut R) -> Presentation {
    loop {
        let e = if cfg.vary_e { rng.gen_range(1..=cfg.e) } else { cfg.e };
        let names = var_names(e);
        let powers: Vec<u32> = (0..e).map(|_| rng.gen_range(2..=cfg.max_degree)).collect();
        let mut gens: Vec<Vec<u32>> = (0..e)
            .map(|i| {
                let mut v = vec![0; e];
                v[i] = powers[i];
                v
            })
            .collect();
        let mut pool: Vec<Vec<u32>> = (2..=cfg.max_degree)
            .flat_map(|d| monomials_of_degree(e, d))
            .filter(|m| m.iter().filter(|&&d| d > 0).count() > 1)
            .filter(|m| !gens.iter().any(|g| divides(g, m)))
            .collect();
        pool.shuffle(rng);
        let want = rng.gen_range(cfg.generators.0..=cfg.generators.1);
        let mut extra = 0;
        for m in pool {
            if extra == want {
                break;
            }
            if gens.iter().any(|g| divides(g, &m) || divides(&m, g)) {
                continue;
            }
            gens.push(m);
            extra += 1;
        }
        let (dim, top) = standard_count(&powers, &gens);
        if dim > cfg.max_dim || cfg.max_socle_degree.is_some_and(|s| top > s) {
            continue;
        }
        // pure powers first, then by degree, for a canonical text
        let mut mixed: BTreeSet<(u32, Vec<u32>)> = BTreeSet::new();
        for g in &gens[e..] {
            mixed.insert((total_degree(g), g.clone()));
        }
        let rels: Vec<String> = gens[..e]
            .iter()
            .cloned()
            .chain(mixed.into_iter().map(|(_, g)| g))
            .map(|g| monomial_text(&g, &names))
            .collect();
        let text = format!(
            "field {field}; vars {}; rels {};",
            names.join(","),
            rels.join(",")
        );
        return parse_presentation(&text).expect("sampler emits valid presentations");
    }
}

/// Generator for sample `index`; independent of how samples are scheduled.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r
}

/// The first `cfg.samples` presentations for the configured seed.
pub fn sample_corpus(cfg: &ScanConfig) -> Result<Vec<Presentation>, ConfigError> {
    let field = cfg.validate()?;
    Ok((0..cfg.samples)
        .map(|i| sample_presentation(cfg, field, &mut sample_rng(cfg.seed, i)))
        .collect())
}
