//! Decision procedures built on resolutions of the residue field: Golod
//! checks, the `(B_n)` / `(H_{m,l})` tables, summand certificates and
//! decompositions, and the scans and probes that use them.

mod dense;
mod fibre;
mod golod;
mod star;
mod summand;

use std::sync::Arc;

use thiserror::Error;

pub use fibre::{fibre_factor_check, is_fibre_product, FibreReport};
pub use golod::{
    bn_hml_table, golod_check, serre_bound_check, verify_golod_decomposition, ConditionTable,
    ConditionRow, DecompositionMode, GolodDecompositionReport, GolodReport, GolodVerdict,
    SerreBound, ShiftResult,
};
pub use star::{
    betti_boundedness_probe, burch_depth_zero_test, exceptional_test, monotonicity_check,
    star_property_scan, tachikawa_probe, BoundednessReport, ExceptionalReport,
    MonotonicityReport, StarPair, StarScanReport, TachikawaReport, Trend,
};
pub use summand::{
    classify, decompose, decompose_with, find_isomorphism, free_rank, match_decompositions,
    simple_summand_split, simple_summand_test, summand_test, verify_split, Decomposition,
    DecompositionReport, Piece, Refutation, SummandCertificate, SummandEntry, SummandOutcome,
    SummandRecord, ISO_TRIALS, SPLIT_TRIALS,
};

use crate::algebra::FiniteLocalAlgebra;
use crate::arith::{Field, FieldSpec};
use crate::koszul::{koszul_profile, ring_profile, KoszulProfile};
use crate::modules::{residue_field, resolve, ActionModule, FreeResolution, ModuleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("{0} needs a prime field")]
    UnsupportedField(&'static str),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("Serre bound violated at degree {degree} (slack {slack})")]
    NegativeSlack { degree: usize, slack: i64 },
    #[error("operation needs a nonzero module")]
    ZeroModule,
    #[error("no summand certificate for the pair ({0}, {1})")]
    NoCertificate(usize, usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Characteristic of a prime field.
pub(crate) fn prime_of<F: Field>(f: &F) -> Option<u64> {
    match f.spec() {
        FieldSpec::PrimeField(p) => Some(p as u64),
        FieldSpec::Rationals => None,
    }
}

/// The resolution of `k` over an algebra, extended on demand, with the
/// Koszul profile of the ring.
pub struct SyzygyTower<F: Field> {
    algebra: Arc<FiniteLocalAlgebra<F>>,
    res: FreeResolution<F>,
    ring: KoszulProfile,
}

impl<F: Field> SyzygyTower<F> {
    pub fn new(algebra: &Arc<FiniteLocalAlgebra<F>>) -> Self {
        SyzygyTower {
            algebra: algebra.clone(),
            res: resolve(&residue_field(algebra), 0),
            ring: ring_profile(algebra),
        }
    }

    pub fn algebra(&self) -> &Arc<FiniteLocalAlgebra<F>> {
        &self.algebra
    }

    pub fn embedding_dim(&self) -> usize {
        self.algebra.embedding_dim()
    }

    pub fn ring_profile(&self) -> &KoszulProfile {
        &self.ring
    }

    /// `h_j(R)`, zero outside `0..=e`.
    pub fn h(&self, j: i64) -> usize {
        self.ring.get(j)
    }

    pub fn ensure(&mut self, n: usize) {
        self.res.extend_to(n);
    }

    pub fn resolution(&mut self, n: usize) -> &FreeResolution<F> {
        self.ensure(n);
        &self.res
    }

    /// `β_n(k)`, zero for negative `n`.
    pub fn betti(&mut self, n: i64) -> usize {
        if n < 0 {
            return 0;
        }
        self.ensure(n as usize);
        self.res.betti[n as usize]
    }

    pub fn betti_upto(&mut self, n: usize) -> Vec<usize> {
        self.ensure(n);
        self.res.betti[..=n].to_vec()
    }

    pub fn syzygy(&mut self, n: usize) -> &ActionModule<F> {
        self.ensure(n);
        self.res.syzygy(n)
    }

    /// Koszul profile of `syz_n(k)`; the zero profile for negative `n`.
    pub fn profile(&mut self, n: i64) -> KoszulProfile {
        if n < 0 {
            return KoszulProfile {
                label: "0".into(),
                h: vec![0; self.embedding_dim() + 1],
            };
        }
        koszul_profile(self.syzygy(n as usize))
    }

    /// `h_i(syz_n k)` with both indices allowed out of range.
    pub fn syz_h(&mut self, i: i64, n: i64) -> usize {
        self.profile(n).get(i)
    }
}
