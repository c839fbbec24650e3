//! Modules over a [`FiniteLocalAlgebra`] in representation form: a vector
//! space with one commuting nilpotent matrix per variable.

mod homology;
mod resolution;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use homology::{
    canonical_module, dual_sequence_check, ext_dims, ext_dims_from, hom_matrices, hom_module,
    tor_dims, tor_dims_from,
    DualSequenceReport, HomModule,
};
pub use resolution::{resolve, syzygy_step, BettiTable, FreePresentation, FreeResolution, SyzygyStep};

use crate::algebra::{Degree, FiniteLocalAlgebra};
use crate::arith::{
    echelon_from_rref, span_of, Accumulator, ArithError, Echelon, ExactMatrix, Field, Rref,
    SparseVec, Subspace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("module invariant violated: {0}")]
    Invariant(String),
}

/// JSON record of a dimension vector (Betti numbers, Ext or Tor dimensions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRecord {
    pub label: String,
    pub algebra_hash: String,
    pub values: Vec<usize>,
}

#[derive(Default)]
struct Cache<F: Field> {
    generators: OnceLock<Vec<usize>>,
    monomial_actions: OnceLock<Vec<ExactMatrix<F>>>,
    koszul: OnceLock<Vec<usize>>,
}

/// Finite-dimensional module given by the action of each variable.
pub struct ActionModule<F: Field> {
    algebra: Arc<FiniteLocalAlgebra<F>>,
    dim: usize,
    action: Vec<ExactMatrix<F>>,
    degrees: Option<Vec<Degree>>,
    label: String,
    cache: Arc<Cache<F>>,
}

impl<F: Field> Clone for ActionModule<F> {
    fn clone(&self) -> Self {
        ActionModule {
            algebra: self.algebra.clone(),
            dim: self.dim,
            action: self.action.clone(),
            degrees: self.degrees.clone(),
            label: self.label.clone(),
            cache: self.cache.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for ActionModule<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActionModule")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .finish()
    }
}

pub(crate) fn add_degree(a: &[i32], b: &[i32]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub_degree(a: &[i32], b: &[i32]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl<F: Field> ActionModule<F> {
    /// Builds a module and checks the action: square matrices of the right
    /// size, pairwise commuting, nilpotent, and killed by every relation.
    pub fn new(
        algebra: Arc<FiniteLocalAlgebra<F>>,
        action: Vec<ExactMatrix<F>>,
        degrees: Option<Vec<Degree>>,
        label: impl Into<String>,
    ) -> Result<Self, ModuleError> {
        let dim = action.first().map_or(0, |m| m.rows());
        let m = Self::from_parts(algebra, dim, action, degrees, label);
        m.check()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        algebra: Arc<FiniteLocalAlgebra<F>>,
        dim: usize,
        action: Vec<ExactMatrix<F>>,
        degrees: Option<Vec<Degree>>,
        label: impl Into<String>,
    ) -> Self {
        debug_assert_eq!(action.len(), algebra.nvars());
        // a grading on the module is only meaningful when the algebra has one
        let degrees = degrees.filter(|_| algebra.var_degrees().is_some());
        ActionModule {
            algebra,
            dim,
            action,
            degrees,
            label: label.into(),
            cache: Arc::new(Cache {
                generators: OnceLock::new(),
                monomial_actions: OnceLock::new(),
                koszul: OnceLock::new(),
            }),
        }
    }

    /// Verifies the module axioms exactly.
    pub fn check(&self) -> Result<(), ModuleError> {
        let alg = &self.algebra;
        if self.action.len() != alg.nvars() {
            return Err(ModuleError::Invariant("wrong number of action matrices".into()));
        }
        for a in &self.action {
            if a.rows() != self.dim || a.cols() != self.dim {
                return Err(ModuleError::Invariant("action matrix has wrong shape".into()));
            }
        }
        for i in 0..self.action.len() {
            for j in i + 1..self.action.len() {
                if self.action[i].matmul(&self.action[j])? != self.action[j].matmul(&self.action[i])? {
                    return Err(ModuleError::Invariant(format!(
                        "actions of variables {i} and {j} do not commute"
                    )));
                }
            }
        }
        for r in alg.minimal_relations() {
            for k in 0..self.dim {
                let mut acc = Accumulator::new(alg.field(), self.dim);
                let e = vec![(k, alg.field().one())];
                for (exps, c) in r.terms() {
                    let c = alg.field().from_rational(c)?;
                    acc.axpy(alg.field(), &c, &self.act_monomial(exps, &e));
                }
                if !acc.drain(alg.field()).is_empty() {
                    return Err(ModuleError::Invariant(format!(
                        "relation {} does not act as zero",
                        r.render(&alg.presentation().variables)
                    )));
                }
            }
        }
        if let Some(d) = &self.degrees {
            if d.len() != self.dim {
                return Err(ModuleError::Invariant("degree list has wrong length".into()));
            }
            let vd = alg.var_degrees().expect("graded algebra");
            for (i, a) in self.action.iter().enumerate() {
                for (j, col) in a.columns().iter().enumerate() {
                    let want = add_degree(&d[j], &vd[i]);
                    if col.iter().any(|(r, _)| d[*r] != want) {
                        return Err(ModuleError::Invariant("action is not homogeneous".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<FiniteLocalAlgebra<F>> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn actions(&self) -> &[ExactMatrix<F>] {
        &self.action
    }

    pub fn degrees(&self) -> Option<&[Degree]> {
        self.degrees.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same module with the grading dropped, for subspaces that are not
    /// homogeneous.
    pub fn ungraded(&self) -> Self {
        Self::from_parts(
            self.algebra.clone(),
            self.dim,
            self.action.clone(),
            None,
            self.label.clone(),
        )
    }

    pub(crate) fn koszul_cache(&self) -> &OnceLock<Vec<usize>> {
        &self.cache.koszul
    }

    pub(crate) fn same_algebra(&self, other: &Self) -> Result<(), ModuleError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.hash() == other.algebra.hash()
        {
            Ok(())
        } else {
            Err(ModuleError::AlgebraMismatch)
        }
    }

    /// Zero degree of the algebra's grading group.
    pub(crate) fn zero_degree(algebra: &FiniteLocalAlgebra<F>) -> Option<Degree> {
        algebra.var_degrees().map(|vd| vec![0; vd[0].len()])
    }

    pub fn act_monomial(&self, exps: &[u32], v: &SparseVec<F>) -> SparseVec<F> {
        FiniteLocalAlgebra::act_monomial_with(&self.action, exps, v)
    }

    /// Action of every algebra basis monomial, indexed like the algebra basis.
    pub fn monomial_actions(&self) -> &[ExactMatrix<F>] {
        self.cache.monomial_actions.get_or_init(|| {
            let alg = &self.algebra;
            let f = alg.field();
            let mut out: Vec<ExactMatrix<F>> = Vec::with_capacity(alg.dim());
            for (r, exps) in alg.basis().iter().enumerate() {
                let m = match exps.iter().position(|&a| a > 0) {
                    None => ExactMatrix::identity(f.clone(), self.dim),
                    Some(i) => {
                        let mut prev = exps.clone();
                        prev[i] -= 1;
                        match alg.basis_index(&prev) {
                            Some(p) if p < r => self.action[i].matmul(&out[p]).expect("shapes"),
                            _ => {
                                let cols = (0..self.dim)
                                    .map(|k| self.act_monomial(exps, &vec![(k, f.one())]))
                                    .collect();
                                ExactMatrix::from_columns(f.clone(), self.dim, cols)
                            }
                        }
                    }
                };
                out.push(m);
            }
            out
        })
    }

    /// `r * v` for every basis monomial `r` of the algebra.
    pub fn orbit(&self, v: &SparseVec<F>) -> Vec<SparseVec<F>> {
        let alg = &self.algebra;
        let mut out: Vec<SparseVec<F>> = Vec::with_capacity(alg.dim());
        for (r, exps) in alg.basis().iter().enumerate() {
            let img = match exps.iter().position(|&a| a > 0) {
                None => v.clone(),
                Some(i) => {
                    let mut prev = exps.clone();
                    prev[i] -= 1;
                    match alg.basis_index(&prev) {
                        Some(p) if p < r => self.action[i].mul_vec(&out[p]),
                        _ => self.act_monomial(exps, v),
                    }
                }
            };
            out.push(img);
        }
        out
    }

    /// `a * v` for an algebra element `a` in basis coordinates.
    pub fn act_element(&self, a: &SparseVec<F>, v: &SparseVec<F>) -> SparseVec<F> {
        let f = self.field();
        let mut acc = Accumulator::new(f, self.dim);
        for (r, c) in a {
            acc.axpy(f, c, &self.monomial_actions()[*r].mul_vec(v));
        }
        acc.drain(f)
    }

    /// Row-reduced basis of `mM`.
    pub fn radical(&self) -> Rref<F> {
        let vecs: Vec<SparseVec<F>> = self
            .action
            .iter()
            .flat_map(|a| a.columns().iter().filter(|c| !c.is_empty()).cloned())
            .collect();
        span_of(self.field(), self.dim, &vecs, self.degrees())
    }

    /// Indices of the standard basis vectors chosen as minimal generators:
    /// the non-pivot columns of `mM`, so they map to a basis of `M/mM`.
    pub fn generator_indices(&self) -> &[usize] {
        self.cache
            .generators
            .get_or_init(|| self.radical().free_columns())
    }

    /// Lifts of a basis of `M/mM`; their count is `beta_0(M)`.
    pub fn minimal_generators(&self) -> Vec<SparseVec<F>> {
        let one = self.field().one();
        self.generator_indices()
            .iter()
            .map(|&c| vec![(c, one.clone())])
            .collect()
    }

    pub fn num_generators(&self) -> usize {
        self.generator_indices().len()
    }

    /// Basis of `{v : m v = 0}`.
    pub fn socle(&self) -> Vec<SparseVec<F>> {
        crate::algebra::joint_kernel(self.field(), self.dim, &self.action)
    }

    /// Restriction to an invariant subspace given in identity form.
    pub fn restrict(&self, sub: &Subspace<F>, label: impl Into<String>) -> Self {
        let f = self.field();
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols = sub.basis().iter().map(|v| sub.coords(&a.mul_vec(v))).collect();
                ExactMatrix::from_columns(f.clone(), sub.dim(), cols)
            })
            .collect();
        let degrees = self
            .degrees
            .as_ref()
            .map(|d| sub.coord_cols().iter().map(|&c| d[c].clone()).collect());
        Self::from_parts(self.algebra.clone(), sub.dim(), action, degrees, label)
    }

    /// Quotient by an invariant subspace; the basis is the set of non-pivot
    /// standard vectors, returned alongside.
    pub fn quotient(&self, sub: &Rref<F>, label: impl Into<String>) -> (Self, Vec<usize>) {
        let f = self.field();
        let free = sub.free_columns();
        let mut pos = vec![usize::MAX; self.dim];
        for (k, &c) in free.iter().enumerate() {
            pos[c] = k;
        }
        let mut e = echelon_from_rref(sub);
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols = free
                    .iter()
                    .map(|&c| {
                        e.reduce(a.column(c))
                            .into_iter()
                            .map(|(i, x)| (pos[i], x))
                            .collect()
                    })
                    .collect();
                ExactMatrix::from_columns(f.clone(), free.len(), cols)
            })
            .collect();
        let degrees = self
            .degrees
            .as_ref()
            .filter(|d| is_homogeneous_span(sub, d, &mut e))
            .map(|d| free.iter().map(|&c| d[c].clone()).collect());
        (
            Self::from_parts(self.algebra.clone(), free.len(), action, degrees, label),
            free,
        )
    }

    /// Row-reduced basis of the submodule generated by the given vectors.
    pub fn submodule_span(&self, gens: &[SparseVec<F>]) -> Rref<F> {
        let mut e = Echelon::new(self.field().clone(), self.dim);
        let mut queue: Vec<SparseVec<F>> = Vec::new();
        for g in gens {
            for v in self.orbit(g) {
                if !v.is_empty() {
                    queue.push(v);
                }
            }
        }
        for v in &queue {
            e.insert(v);
        }
        e.into_rref()
    }

    /// Matrix of a module endomorphism or map applied to a vector.
    pub fn is_equivariant(&self, target: &Self, map: &ExactMatrix<F>) -> bool {
        self.action
            .iter()
            .zip(&target.action)
            .all(|(a, b)| map.matmul(a).ok() == b.matmul(map).ok())
    }

    pub fn dimension_record(&self, values: Vec<usize>) -> DimensionRecord {
        DimensionRecord {
            label: self.label.clone(),
            algebra_hash: self.algebra.hash().to_string(),
            values,
        }
    }
}

/// The residue field `k`: one dimension, every variable acts as zero.
pub fn residue_field<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>) -> ActionModule<F> {
    let f = a.field();
    let action = (0..a.nvars()).map(|_| ExactMatrix::zeros(f.clone(), 1, 1)).collect();
    let degrees = ActionModule::zero_degree(a).map(|z| vec![z]);
    ActionModule::from_parts(a.clone(), 1, action, degrees, "k")
}

/// `R^n` with block-diagonal action.
pub fn free_module<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>, n: usize) -> ActionModule<F> {
    let shifts = ActionModule::zero_degree(a).map(|z| vec![z; n]);
    free_module_shifted(a, n, shifts.as_deref(), if n == 1 { "R".into() } else { format!("R^{n}") })
}

/// `R^n` whose `j`-th generator has the given degree.
pub(crate) fn free_module_shifted<F: Field>(
    a: &Arc<FiniteLocalAlgebra<F>>,
    n: usize,
    shifts: Option<&[Degree]>,
    label: String,
) -> ActionModule<F> {
    let f = a.field();
    let d = a.dim();
    let action = a
        .actions()
        .iter()
        .map(|m| {
            let blocks: Vec<&ExactMatrix<F>> = vec![m; n];
            ExactMatrix::block_diagonal(f.clone(), &blocks)
        })
        .collect();
    let degrees = match (shifts, a.degrees()) {
        (Some(s), Some(bd)) => Some(
            s.iter()
                .flat_map(|sh| bd.iter().map(move |b| add_degree(sh, b)))
                .collect(),
        ),
        _ => None,
    };
    ActionModule::from_parts(a.clone(), n * d, action, degrees, label)
}

/// The maximal ideal as a submodule of `R`.
pub fn maximal_ideal<F: Field>(a: &Arc<FiniteLocalAlgebra<F>>) -> ActionModule<F> {
    let f = a.field();
    let n = a.dim();
    let basis = (1..n).map(|i| vec![(i, f.one())]).collect();
    let sub = Subspace::new(f.clone(), n, basis, (1..n).collect());
    free_module(a, 1).restrict(&sub, "m")
}

/// `R / (elements)`.
/// Whether every homogeneous component of every row already lies in the span.
fn is_homogeneous_span<F: Field>(sub: &Rref<F>, degrees: &[Degree], e: &mut Echelon<F>) -> bool {
    sub.rows.iter().all(|row| {
        let mut parts: Vec<(&Degree, SparseVec<F>)> = Vec::new();
        for (i, x) in row {
            match parts.iter_mut().find(|(d, _)| **d == degrees[*i]) {
                Some((_, v)) => v.push((*i, x.clone())),
                None => parts.push((&degrees[*i], vec![(*i, x.clone())])),
            }
        }
        parts.len() == 1 || parts.iter().all(|(_, v)| e.reduce(v).is_empty())
    })
}

pub fn cyclic_quotient<F: Field>(
    a: &Arc<FiniteLocalAlgebra<F>>,
    elements: &[SparseVec<F>],
    label: impl Into<String>,
) -> ActionModule<F> {
    let r = free_module(a, 1);
    let span = r.submodule_span(elements);
    r.quotient(&span, label).0
}

/// Direct sum that allows an empty list of summands.
pub(crate) fn direct_sum_or_zero<F: Field>(
    a: &Arc<FiniteLocalAlgebra<F>>,
    parts: &[&ActionModule<F>],
) -> ActionModule<F> {
    if parts.is_empty() {
        return free_module(a, 0);
    }
    direct_sum(parts, "").expect("same algebra")
}

/// Direct sum with block-diagonal action.
pub fn direct_sum<F: Field>(
    parts: &[&ActionModule<F>],
    label: impl Into<String>,
) -> Result<ActionModule<F>, ModuleError> {
    let first = parts.first().expect("at least one summand");
    for p in parts {
        first.same_algebra(p)?;
    }
    let alg = first.algebra.clone();
    let f = alg.field().clone();
    let dim = parts.iter().map(|p| p.dim).sum();
    let action = (0..alg.nvars())
        .map(|i| {
            let blocks: Vec<&ExactMatrix<F>> = parts.iter().map(|p| &p.action[i]).collect();
            ExactMatrix::block_diagonal(f.clone(), &blocks)
        })
        .collect();
    let degrees = if parts.iter().all(|p| p.degrees.is_some()) {
        Some(
            parts
                .iter()
                .flat_map(|p| p.degrees.clone().unwrap())
                .collect(),
        )
    } else {
        None
    };
    Ok(ActionModule::from_parts(alg, dim, action, degrees, label))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::{build_algebra, parse_presentation};
    use crate::arith::{PrimeField, Rationals};

    pub(crate) fn alg_q(text: &str) -> Arc<FiniteLocalAlgebra<Rationals>> {
        Arc::new(build_algebra(&parse_presentation(text).unwrap(), Rationals).unwrap())
    }

    #[test]
    fn quotients_keep_grading_only_when_homogeneous() {
        let a = alg_q("vars x,y; rels x^3, y^3;");
        let x = a.basis_index(&[1, 0]).unwrap();
        let y2 = a.basis_index(&[0, 2]).unwrap();
        let one = Rationals.one();
        let graded = cyclic_quotient(&a, &[vec![(x, one.clone())]], "R/x");
        assert!(graded.degrees().is_some());
        let mixed = cyclic_quotient(&a, &[vec![(x, one.clone()), (y2, one)]], "R/(x+y2)");
        assert!(mixed.degrees().is_none());
        mixed.check().unwrap();
        let res = crate::modules::resolve(&mixed, 3);
        assert_eq!(res.betti.len(), 4);
    }

    #[test]
    fn constructors_satisfy_module_axioms() {
        let a = alg_q("vars x,y; rels x^2, y^2;");
        let k = residue_field(&a);
        k.check().unwrap();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.num_generators(), 1);
        let r2 = free_module(&a, 2);
        r2.check().unwrap();
        assert_eq!(r2.dim(), 8);
        assert_eq!(r2.num_generators(), 2);
        assert_eq!(free_module(&a, 0).dim(), 0);
        assert!(free_module(&a, 0).minimal_generators().is_empty());
        let m = maximal_ideal(&a);
        m.check().unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.num_generators(), 2);
        let s = direct_sum(&[&k, &r2], "k+R^2").unwrap();
        s.check().unwrap();
        assert_eq!(s.num_generators(), 3);
    }

    #[test]
    fn maximal_ideal_of_square_of_max_ideal() {
        let a = alg_q("vars x,y; rels x^2, x*y, y^2;");
        let m = maximal_ideal(&a);
        assert_eq!(m.minimal_generators().len(), 2);
        assert_eq!(m.socle().len(), 2);
        assert_eq!(free_module(&a, 1).num_generators(), 1);
    }

    #[test]
    fn cyclic_quotient_is_a_module() {
        let f = PrimeField::new(101).unwrap();
        let a = Arc::new(
            build_algebra(&parse_presentation("vars x,y; rels x^2, y^2;").unwrap(), f).unwrap(),
        );
        let x = vec![(a.basis_index(&[1, 0]).unwrap(), 1u32)];
        let q = cyclic_quotient(&a, &[x], "R/(x)");
        q.check().unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(q.num_generators(), 1);
    }

    #[test]
    fn bad_action_is_rejected() {
        let a = alg_q("vars x; rels x^2;");
        let f = Rationals;
        // x acting as the identity is not nilpotent and violates x^2 = 0
        let bad = ActionModule::new(a, vec![ExactMatrix::identity(f, 2)], None, "bad");
        assert!(bad.is_err());
    }
}
