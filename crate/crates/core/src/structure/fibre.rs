//! Fibre products: recognizing them and checking the splitting of the
//! maximal ideal.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::summand::{decompose, summand_test};
use super::{prime_of, StructureError, SyzygyTower};
use crate::algebra::FiniteLocalAlgebra;
use crate::arith::{ExactMatrix, Field};
use crate::modules::{direct_sum, maximal_ideal, ActionModule};
use crate::report::{all_hold, Check};

/// Whether `R` is a nontrivial fibre product `S x_k T`, which happens
/// exactly when `m` is a decomposable module. Monomial algebras whose
/// variables split into two classes with all mixed products zero are
/// recognized exactly; otherwise `m` is decomposed over a prime field
/// (a `false` there is Monte Carlo). `None` over `Q` when no variable split
/// exists.
pub fn is_fibre_product<F: Field>(
    a: &Arc<FiniteLocalAlgebra<F>>,
    seed: u64,
) -> Result<Option<bool>, StructureError> {
    if a.embedding_dim() < 2 {
        return Ok(Some(false));
    }
    if a.is_monomial() && variable_split(a) {
        return Ok(Some(true));
    }
    if prime_of(a.field()).is_none() {
        return Ok(None);
    }
    let d = decompose(&maximal_ideal(a), seed)?;
    Ok(Some(d.num_indecomposables() > 1))
}

/// Variables fall into at least two classes of the graph joining `x_i` and
/// `x_j` when `x_i x_j != 0`.
fn variable_split<F: Field>(a: &FiniteLocalAlgebra<F>) -> bool {
    let n = a.nvars();
    let live: Vec<usize> = (0..n)
        .filter(|&i| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            a.basis_index(&e).is_some()
        })
        .collect();
    if live.len() < 2 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![live[0]];
    seen[live[0]] = true;
    while let Some(i) = stack.pop() {
        for &j in &live {
            if seen[j] {
                continue;
            }
            let mut e = vec![0u32; n];
            e[i] += 1;
            e[j] += 1;
            if a.basis_index(&e).is_some() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    live.iter().any(|&i| !seen[i])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreReport {
    pub algebra_hash: String,
    pub factor_hashes: (String, String),
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// The maximal ideal of a factor as a module over `R = S x_k T`. The
/// factor's variables start at `offset`; the others act as zero.
fn pulled_back<F: Field>(
    r: &Arc<FiniteLocalAlgebra<F>>,
    factor: &Arc<FiniteLocalAlgebra<F>>,
    offset: usize,
    label: &str,
) -> Result<ActionModule<F>, StructureError> {
    let m = maximal_ideal(factor);
    let f = r.field();
    let action = (0..r.nvars())
        .map(|i| {
            if i >= offset && i < offset + factor.nvars() {
                m.actions()[i - offset].clone()
            } else {
                ExactMatrix::zeros(f.clone(), m.dim(), m.dim())
            }
        })
        .collect();
    Ok(ActionModule::new(r.clone(), action, None, label)?)
}

/// For `R = S x_k T`: `m_R ≅ m_S ⊕ m_T` (split injections both ways and
/// equal dimensions), `β_1(k) = e_S + e_T`, and `dim R = dim S + dim T - 1`.
pub fn fibre_factor_check<F: Field>(
    s: &Arc<FiniteLocalAlgebra<F>>,
    t: &Arc<FiniteLocalAlgebra<F>>,
    r: &Arc<FiniteLocalAlgebra<F>>,
    seed: u64,
) -> Result<FibreReport, StructureError> {
    let ms = pulled_back(r, s, 0, "m_S")?;
    let mt = pulled_back(r, t, s.nvars(), "m_T")?;
    let sum = direct_sum(&[&ms, &mt], "m_S + m_T")?;
    let mr = maximal_ideal(r);
    let mut checks = vec![Check::with_detail(
        "dim R = dim S + dim T - 1",
        r.dim() + 1 == s.dim() + t.dim(),
        format!("{} vs {} + {} - 1", r.dim(), s.dim(), t.dim()),
    )];
    let mut tower = SyzygyTower::new(r);
    let b1 = tower.betti(1);
    checks.push(Check::with_detail(
        "beta_1(k) = e_S + e_T",
        b1 == s.embedding_dim() + t.embedding_dim(),
        format!("{b1} vs {} + {}", s.embedding_dim(), t.embedding_dim()),
    ));
    checks.push(Check::new("dim m_R = dim m_S + dim m_T", mr.dim() == sum.dim()));
    let into = summand_test(&sum, &mr, seed)?;
    checks.push(Check::new(
        "m_S + m_T splits into m_R",
        into.is_certificate() && into.verify(&sum, &mr),
    ));
    let back = summand_test(&mr, &sum, seed)?;
    checks.push(Check::new(
        "m_R splits into m_S + m_T",
        back.is_certificate() && back.verify(&mr, &sum),
    ));
    Ok(FibreReport {
        algebra_hash: r.hash().to_string(),
        factor_hashes: (s.hash().to_string(), t.hash().to_string()),
        seed,
        passed: all_hold(&checks),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, fibre_product, parse_presentation};
    use crate::arith::PrimeField;

    fn alg_p(text: &str) -> Arc<FiniteLocalAlgebra<PrimeField>> {
        let p = parse_presentation(text).unwrap();
        Arc::new(build_algebra(&p, PrimeField::new(101).unwrap()).unwrap())
    }

    #[test]
    fn recognizes_fibre_products() {
        let r = alg_p("vars x,y,z,w; rels x^2,y^2,x*z,x*w,y*z,y*w,z^2,w^2;");
        assert_eq!(is_fibre_product(&r, 1).unwrap(), Some(true));
        let ci = alg_p("vars x,y; rels x^2,y^2;");
        assert_eq!(is_fibre_product(&ci, 1).unwrap(), Some(false));
        let h = alg_p("vars x; rels x^3;");
        assert_eq!(is_fibre_product(&h, 1).unwrap(), Some(false));
        // (x,y)^2 is k[x]/x^2 x_k k[y]/y^2
        let sq = alg_p("vars x,y; rels x^2,x*y,y^2;");
        assert_eq!(is_fibre_product(&sq, 1).unwrap(), Some(true));
    }

    #[test]
    fn maximal_ideal_splits() {
        let s = alg_p("vars x,y; rels x^2,y^2;");
        let t = alg_p("vars z; rels z^3;");
        let r = Arc::new(fibre_product(&s, &t).unwrap());
        let rep = fibre_factor_check(&s, &t, &r, 3).unwrap();
        assert!(rep.passed, "{:?}", rep.checks);
    }
}
