//! Ring presentations and the finite-dimensional local algebras they define.

mod build;
mod parse;
pub mod poly;

use thiserror::Error;

pub use build::{build_algebra, fibre_product, FiniteLocalAlgebra};
pub(crate) use build::joint_kernel;
pub use parse::{parse_presentation, ParseError, Presentation};
pub use poly::{Exponents, Polynomial};

use crate::arith::{ArithError, FieldSpec};

/// Grading key of a homogeneous basis vector: a multidegree for monomial
/// ideals, a one-entry total degree for homogeneous ideals.
pub type Degree = Vec<i32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("increase truncation_degree or ideal not Artinian ({0})")]
    NotArtinian(String),
    #[error("truncation degree {trunc} is below the relation degree {degree}")]
    TruncationTooSmall { trunc: u32, degree: u32 },
    #[error("fibre product factor equals the residue field")]
    TrivialFactor,
    #[error("fibre product factors live over different fields: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
