use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::parse::Presentation;
use super::poly::{divides, monomials_of_degree, render_monomial, total_degree, Exponents, Polynomial};
use super::{AlgebraError, Degree};
use crate::arith::{kernel_of_columns, Echelon, ExactMatrix, Field, SparseVec};

/// An Artinian local algebra `k[x]/I` with a monomial-tagged basis and the
/// multiplication matrices of the variables.
#[derive(Clone)]
pub struct FiniteLocalAlgebra<F: Field> {
    field: F,
    presentation: Presentation,
    relations: Vec<Polynomial>,
    basis: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
    action: Vec<ExactMatrix<F>>,
    hilbert: Vec<usize>,
    koszul_vars: Vec<usize>,
    degrees: Option<Vec<Degree>>,
    var_degrees: Option<Vec<Degree>>,
    monomial: bool,
    hash: String,
}

impl<F: Field> fmt::Debug for FiniteLocalAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLocalAlgebra")
            .field("presentation", &self.presentation.to_string())
            .field("dim", &self.dim())
            .field("hilbert", &self.hilbert)
            .finish()
    }
}

impl<F: Field> FiniteLocalAlgebra<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Relations after minimalization, in the order given.
    pub fn minimal_relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.action.len()
    }

    /// `dim m/m^2`.
    pub fn embedding_dim(&self) -> usize {
        self.koszul_vars.len()
    }

    pub fn basis(&self) -> &[Exponents] {
        &self.basis
    }

    pub fn basis_index(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn basis_name(&self, i: usize) -> String {
        let s = render_monomial(&self.basis[i], &self.presentation.variables);
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }

    /// Multiplication by each variable on the basis.
    pub fn actions(&self) -> &[ExactMatrix<F>] {
        &self.action
    }

    /// Dimensions of `m^j / m^(j+1)`, trailing zeros removed.
    pub fn hilbert(&self) -> &[usize] {
        &self.hilbert
    }

    /// Variables whose images form a basis of `m/m^2`; the Koszul complex is
    /// built on these.
    pub fn koszul_vars(&self) -> &[usize] {
        &self.koszul_vars
    }

    /// Degrees of the basis vectors when the ideal is graded.
    pub fn degrees(&self) -> Option<&[Degree]> {
        self.degrees.as_deref()
    }

    /// Degree of each variable when the ideal is graded.
    pub fn var_degrees(&self) -> Option<&[Degree]> {
        self.var_degrees.as_deref()
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    /// Content hash of the presentation.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn unit(&self) -> SparseVec<F> {
        vec![(0, self.field.one())]
    }

    /// `x^exps * v` for a vector in any module with the given actions.
    pub fn act_monomial_with(
        actions: &[ExactMatrix<F>],
        exps: &[u32],
        v: &SparseVec<F>,
    ) -> SparseVec<F> {
        let mut out = v.clone();
        for (i, &a) in exps.iter().enumerate() {
            for _ in 0..a {
                if out.is_empty() {
                    return out;
                }
                out = actions[i].mul_vec(&out);
            }
        }
        out
    }

    /// Product of two algebra elements.
    pub fn mul(&self, a: &SparseVec<F>, b: &SparseVec<F>) -> SparseVec<F> {
        let f = &self.field;
        let mut acc = crate::arith::Accumulator::new(f, self.dim());
        for (k, c) in b {
            let t = Self::act_monomial_with(&self.action, &self.basis[*k], a);
            acc.axpy(f, c, &t);
        }
        acc.drain(f)
    }

    /// Image of a polynomial in the algebra.
    pub fn element_of(&self, p: &Polynomial) -> Result<SparseVec<F>, AlgebraError> {
        let f = &self.field;
        let mut acc = crate::arith::Accumulator::new(f, self.dim());
        let one = self.unit();
        for (e, c) in p.terms() {
            let c = f.from_rational(c)?;
            let t = Self::act_monomial_with(&self.action, e, &one);
            acc.axpy(f, &c, &t);
        }
        Ok(acc.drain(f))
    }

    /// Basis of `{v : x_i v = 0 for all i}`.
    pub fn socle(&self) -> Vec<SparseVec<F>> {
        joint_kernel(&self.field, self.dim(), &self.action)
    }

    /// Artinian Gorenstein iff the socle is one-dimensional.
    pub fn is_gorenstein(&self) -> bool {
        self.socle().len() == 1
    }

    /// Smallest `L` with `m^L = 0`.
    pub fn loewy_length(&self) -> usize {
        self.hilbert.len()
    }
}

/// Joint kernel of a family of square matrices of size `n`.
pub(crate) fn joint_kernel<F: Field>(
    field: &F,
    n: usize,
    mats: &[ExactMatrix<F>],
) -> Vec<SparseVec<F>> {
    let columns: Vec<SparseVec<F>> = (0..n)
        .map(|j| {
            let mut col = Vec::new();
            for (i, m) in mats.iter().enumerate() {
                col.extend(m.column(j).iter().map(|(r, x)| (r + i * n, x.clone())));
            }
            col
        })
        .collect();
    kernel_of_columns::<F, u8>(field, n * mats.len(), &columns, None)
        .basis()
        .to_vec()
}

/// Builds the algebra over the given field, overriding the field named in
/// the presentation.
pub fn build_algebra<F: Field>(
    p: &Presentation,
    field: F,
) -> Result<FiniteLocalAlgebra<F>, AlgebraError> {
    let presentation = p.over(field.spec());
    let max_deg = presentation.max_relation_degree();
    if max_deg > presentation.truncation_degree {
        return Err(AlgebraError::TruncationTooSmall {
            trunc: presentation.truncation_degree,
            degree: max_deg,
        });
    }
    // relations that vanish over the chosen field are dropped
    let mut rels = Vec::new();
    for r in &presentation.relations {
        let mut nonzero = false;
        for (_, c) in r.terms() {
            if !field.is_zero(&field.from_rational(c)?) {
                nonzero = true;
            }
        }
        if nonzero {
            rels.push(r.clone());
        }
    }
    let alg = if rels.iter().all(Polynomial::is_monomial) {
        build_monomial(presentation, field, rels)?
    } else {
        build_general(presentation, field, rels)?
    };
    verify(&alg)?;
    Ok(alg)
}

fn build_monomial<F: Field>(
    presentation: Presentation,
    field: F,
    rels: Vec<Polynomial>,
) -> Result<FiniteLocalAlgebra<F>, AlgebraError> {
    let n = presentation.nvars();
    let gens: Vec<Exponents> = rels.iter().map(|r| r.terms().next().unwrap().0.clone()).collect();
    // drop generators divisible by an earlier kept one or a strictly smaller one
    let mut keep = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let redundant = gens.iter().enumerate().any(|(j, h)| {
            j != i && divides(h, g) && (h != g || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Exponents> = keep.iter().map(|&i| gens[i].clone()).collect();
    let relations: Vec<Polynomial> = keep.iter().map(|&i| rels[i].clone()).collect();
    let mut bound = vec![0u32; n];
    for v in 0..n {
        let pure = minimal
            .iter()
            .filter(|g| g.iter().enumerate().all(|(w, &a)| w == v || a == 0))
            .map(|g| g[v])
            .min();
        match pure {
            Some(a) => bound[v] = a,
            None => {
                return Err(AlgebraError::NotArtinian(format!(
                    "no power of `{}` lies in the ideal",
                    presentation.variables[v]
                )))
            }
        }
    }
    // enumerate the box and keep standard monomials
    let mut basis: Vec<Exponents> = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        if !minimal.iter().any(|g| divides(g, &cur)) {
            basis.push(cur.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                break;
            }
            cur[k] += 1;
            if cur[k] < bound[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    basis.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then(b.cmp(a)));
    let index: HashMap<Exponents, usize> =
        basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let dim = basis.len();
    let action: Vec<ExactMatrix<F>> = (0..n)
        .map(|v| {
            let cols = basis
                .iter()
                .map(|b| {
                    let mut m = b.clone();
                    m[v] += 1;
                    index.get(&m).map_or(Vec::new(), |&t| vec![(t, field.one())])
                })
                .collect();
            ExactMatrix::from_columns(field.clone(), dim, cols)
        })
        .collect();
    let mut hilbert = Vec::new();
    for b in &basis {
        let d = total_degree(b) as usize;
        if hilbert.len() <= d {
            hilbert.resize(d + 1, 0);
        }
        hilbert[d] += 1;
    }
    let koszul_vars: Vec<usize> = (0..n).filter(|&v| bound[v] >= 2).collect();
    let degrees = basis.iter().map(|b| b.iter().map(|&a| a as i32).collect()).collect();
    let var_degrees = (0..n)
        .map(|v| (0..n).map(|w| i32::from(v == w)).collect())
        .collect();
    let hash = presentation.hash();
    Ok(FiniteLocalAlgebra {
        field,
        presentation,
        relations,
        basis,
        index,
        action,
        hilbert,
        koszul_vars,
        degrees: Some(degrees),
        var_degrees: Some(var_degrees),
        monomial: true,
        hash,
    })
}

/// Truncated polynomial space `k[x]/m^(top+1)` with monomials ordered by
/// degree, highest first.
struct Truncated {
    monomials: Vec<Exponents>,
    column: HashMap<Exponents, usize>,
    top: u32,
}

impl Truncated {
    fn new(nvars: usize, top: u32) -> Self {
        let mut monomials = Vec::new();
        for d in (0..=top).rev() {
            monomials.extend(monomials_of_degree(nvars, d));
        }
        let column = monomials.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Truncated {
            monomials,
            column,
            top,
        }
    }

    fn len(&self) -> usize {
        self.monomials.len()
    }

    /// `shift * p` with terms above the top degree dropped.
    fn vector<F: Field>(
        &self,
        field: &F,
        p: &Polynomial,
        shift: &[u32],
    ) -> Result<SparseVec<F>, AlgebraError> {
        let mut v: SparseVec<F> = Vec::new();
        for (e, c) in p.terms() {
            let m: Exponents = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            if total_degree(&m) > self.top {
                continue;
            }
            let x = field.from_rational(c)?;
            if !field.is_zero(&x) {
                v.push((self.column[&m], x));
            }
        }
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    }

    /// Vectors spanning `m * (p)`.
    fn multiples<F: Field>(
        &self,
        field: &F,
        p: &Polynomial,
        nvars: usize,
    ) -> Result<Vec<SparseVec<F>>, AlgebraError> {
        let low = p.min_degree();
        let mut out = Vec::new();
        for d in 1..=self.top.saturating_sub(low) {
            for s in monomials_of_degree(nvars, d) {
                let v = self.vector(field, p, &s)?;
                if !v.is_empty() {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }
}

fn build_general<F: Field>(
    presentation: Presentation,
    field: F,
    rels: Vec<Polynomial>,
) -> Result<FiniteLocalAlgebra<F>, AlgebraError> {
    let n = presentation.nvars();
    let top = presentation.truncation_degree + 1;
    let space = Truncated::new(n, top);
    let zero_shift = vec![0u32; n];
    let rel_vecs: Vec<SparseVec<F>> = rels
        .iter()
        .map(|r| space.vector(&field, r, &zero_shift))
        .collect::<Result<_, _>>()?;
    let mut mult_vecs: Vec<SparseVec<F>> = Vec::new();
    for r in &rels {
        mult_vecs.extend(space.multiples(&field, r, n)?);
    }
    // a relation is redundant when it lies in m*I + span(remaining relations)
    let mut kept: Vec<bool> = vec![true; rels.len()];
    for j in 0..rels.len() {
        let mut e = Echelon::new(field.clone(), space.len());
        for v in &mult_vecs {
            e.insert(v);
        }
        for (i, v) in rel_vecs.iter().enumerate() {
            if i != j && kept[i] {
                e.insert(v);
            }
        }
        if e.contains(&rel_vecs[j]) {
            kept[j] = false;
        }
    }
    let relations: Vec<Polynomial> = rels
        .iter()
        .zip(&kept)
        .filter(|(_, k)| **k)
        .map(|(r, _)| r.clone())
        .collect();

    let mut e = Echelon::new(field.clone(), space.len());
    for v in mult_vecs.iter().chain(&rel_vecs) {
        e.insert(v);
    }
    for m in monomials_of_degree(n, top) {
        if !e.contains(&vec![(space.column[&m], field.one())]) {
            return Err(AlgebraError::NotArtinian(format!(
                "{} is not in the ideal at truncation degree {}",
                render_monomial(&m, &presentation.variables),
                presentation.truncation_degree
            )));
        }
    }
    let rref = e.into_rref();
    let mut pivot_row: HashMap<usize, usize> = HashMap::new();
    for (r, &p) in rref.pivots.iter().enumerate() {
        pivot_row.insert(p, r);
    }
    let free: BTreeSet<usize> = rref.free_columns().into_iter().collect();
    let mut basis: Vec<Exponents> = free.iter().map(|&c| space.monomials[c].clone()).collect();
    basis.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then(b.cmp(a)));
    let index: HashMap<Exponents, usize> =
        basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let dim = basis.len();
    // normal form of a monomial in basis coordinates
    let normal_form = |m: &Exponents| -> SparseVec<F> {
        if let Some(&i) = index.get(m) {
            return vec![(i, field.one())];
        }
        let Some(&col) = space.column.get(m) else {
            return Vec::new();
        };
        let Some(&r) = pivot_row.get(&col) else {
            return Vec::new();
        };
        let mut v: SparseVec<F> = rref.rows[r]
            .iter()
            .skip(1)
            .map(|(c, x)| (index[&space.monomials[*c]], field.neg(x)))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    };
    let action: Vec<ExactMatrix<F>> = (0..n)
        .map(|v| {
            let cols = basis
                .iter()
                .map(|b| {
                    let mut m = b.clone();
                    m[v] += 1;
                    normal_form(&m)
                })
                .collect();
            ExactMatrix::from_columns(field.clone(), dim, cols)
        })
        .collect();

    // m^j is spanned by the images of monomials of degree >= j
    let mut filtration = vec![0usize; top as usize + 2];
    {
        let mut e = Echelon::new(field.clone(), dim);
        for d in (0..=top).rev() {
            for m in monomials_of_degree(n, d) {
                e.insert(&normal_form(&m));
            }
            filtration[d as usize] = e.rank();
        }
    }
    let mut hilbert: Vec<usize> = (0..=top as usize)
        .map(|j| filtration[j] - filtration[j + 1])
        .collect();
    while hilbert.len() > 1 && *hilbert.last().unwrap() == 0 {
        hilbert.pop();
    }
    let mut koszul_vars = Vec::new();
    {
        let mut e = Echelon::new(field.clone(), dim);
        for m in monomials_of_degree(n, 2).into_iter().chain((3..=top).flat_map(|d| monomials_of_degree(n, d))) {
            e.insert(&normal_form(&m));
        }
        for v in 0..n {
            let mut m = vec![0u32; n];
            m[v] = 1;
            if e.insert(&normal_form(&m)).is_some() {
                koszul_vars.push(v);
            }
        }
    }
    let (degrees, var_degrees) = if relations.iter().all(Polynomial::is_homogeneous) {
        (
            Some(basis.iter().map(|b| vec![total_degree(b) as i32]).collect()),
            Some(vec![vec![1]; n]),
        )
    } else {
        (None, None)
    };
    let hash = presentation.hash();
    Ok(FiniteLocalAlgebra {
        field,
        presentation,
        relations,
        basis,
        index,
        action,
        hilbert,
        koszul_vars,
        degrees,
        var_degrees,
        monomial: false,
        hash,
    })
}

/// Nilpotency, commutativity and the Hilbert/embedding-dimension identities.
fn verify<F: Field>(a: &FiniteLocalAlgebra<F>) -> Result<(), AlgebraError> {
    let dim = a.dim();
    if dim == 0 || a.basis[0].iter().any(|&x| x != 0) {
        return Err(AlgebraError::Invariant("basis does not start with 1".into()));
    }
    for (v, m) in a.action.iter().enumerate() {
        let mut p = m.clone();
        let mut k = 1;
        while !p.is_zero() {
            if k > dim {
                return Err(AlgebraError::NotArtinian(format!(
                    "action of `{}` is not nilpotent",
                    a.presentation.variables[v]
                )));
            }
            p = p.matmul(m)?;
            k += 1;
        }
    }
    for i in 0..a.action.len() {
        for j in i + 1..a.action.len() {
            if a.action[i].matmul(&a.action[j])? != a.action[j].matmul(&a.action[i])? {
                return Err(AlgebraError::Invariant(format!(
                    "actions of variables {i} and {j} do not commute"
                )));
            }
        }
    }
    if a.hilbert.iter().sum::<usize>() != dim
        || a.hilbert.get(1).copied().unwrap_or(0) != a.koszul_vars.len()
    {
        return Err(AlgebraError::Invariant("Hilbert function mismatch".into()));
    }
    Ok(())
}

/// `S x_k T`: disjoint variables, both relation sets, and all products of a
/// variable of `S` with a variable of `T`.
pub fn fibre_product<F: Field>(
    s: &FiniteLocalAlgebra<F>,
    t: &FiniteLocalAlgebra<F>,
) -> Result<FiniteLocalAlgebra<F>, AlgebraError> {
    if s.field.spec() != t.field.spec() {
        return Err(AlgebraError::FieldMismatch(s.field.spec(), t.field.spec()));
    }
    if s.embedding_dim() == 0 || t.embedding_dim() == 0 {
        return Err(AlgebraError::TrivialFactor);
    }
    let ps = &s.presentation;
    let pt = &t.presentation;
    let mut variables = ps.variables.clone();
    for name in &pt.variables {
        let mut candidate = name.clone();
        let mut k = 2;
        while variables.contains(&candidate) || (candidate != *name && pt.variables.contains(&candidate)) {
            candidate = format!("{name}_{k}");
            k += 1;
        }
        variables.push(candidate);
    }
    let (ns, nt) = (ps.nvars(), pt.nvars());
    let n = ns + nt;
    let mut relations: Vec<Polynomial> = Vec::new();
    relations.extend(s.relations.iter().map(|r| r.embed(n, 0)));
    relations.extend(t.relations.iter().map(|r| r.embed(n, ns)));
    for i in 0..ns {
        for j in 0..nt {
            let mut e = vec![0u32; n];
            e[i] = 1;
            e[ns + j] = 1;
            relations.push(Polynomial::monomial(e, num_rational::BigRational::from_integer(1.into())));
        }
    }
    let explicit = ps.explicit_truncation || pt.explicit_truncation;
    let max_deg = relations.iter().map(Polynomial::degree).max().unwrap_or(0);
    let truncation_degree = if explicit {
        ps.truncation_degree.max(pt.truncation_degree).max(max_deg)
    } else {
        max_deg + 2
    };
    let p = Presentation {
        field: s.field.spec(),
        variables,
        relations,
        truncation_degree,
        explicit_truncation: explicit,
    };
    build_algebra(&p, s.field.clone())
}
