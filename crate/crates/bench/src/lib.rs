//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syzygy_core::algebra::{build_algebra, parse_presentation, FiniteLocalAlgebra};
use syzygy_core::{ExactMatrix, Field, PrimeField, Rationals};

pub const R1: &str = "vars x,y,z; rels x^3,y^3,z^3,x*y,x*z^2;";
pub const R2: &str = "vars x,y,z; rels x^3,y^3,z^3,x^2*y,y*z^2;";
pub const SQUARE: &str = "vars x,y; rels x^2,x*y,y^2;";
pub const FIBRE: &str = "vars x,y,z; rels x^2,y^3,z^3,x*y,x*z,y*z;";

pub fn over_prime(text: &str) -> Arc<FiniteLocalAlgebra<PrimeField>> {
    let p = parse_presentation(text).expect("fixture parses");
    Arc::new(build_algebra(&p, PrimeField::new(101).unwrap()).expect("fixture builds"))
}

pub fn over_q(text: &str) -> Arc<FiniteLocalAlgebra<Rationals>> {
    let p = parse_presentation(text).expect("fixture parses");
    Arc::new(build_algebra(&p, Rationals).expect("fixture builds"))
}

/// `rows x cols` matrix with about `density * rows * cols` small nonzero
/// entries.
pub fn random_sparse<F: Field>(field: F, rows: usize, cols: usize, density: f64, seed: u64) -> ExactMatrix<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            if rng.gen_bool(density) {
                let v = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                triplets.push((r, c, field.from_i64(v)));
            }
        }
    }
    ExactMatrix::from_triplets(field, rows, cols, triplets)
}
