//! Exact homological algebra over Artinian local algebras.
//!
//! The crate computes minimal free resolutions, Koszul homology, and Hom,
//! Ext and Tor over finite-dimensional local algebras `k[x_1..x_e]/I`, and
//! builds decision procedures on top of them: Serre-bound and Golod checks,
//! direct-summand certificates between syzygies of the residue field, and
//! the Burch, exceptional and Ext-vanishing probes.

pub mod algebra;
pub mod arith;
pub mod corpus;
pub mod koszul;
pub mod modules;
pub mod report;
pub mod structure;

pub use arith::{ExactMatrix, Field, FieldSpec, PrimeField, Rationals, Scalar, SparseVec};
