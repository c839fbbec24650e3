use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Polynomial with rational coefficients in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exps: Exponents, coeff: BigRational) -> Self {
        let mut p = Polynomial::zero(exps.len());
        p.add_term(exps, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Exponents, coeff: BigRational) {
        assert_eq!(exps.len(), self.nvars);
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single-term polynomial.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| total_degree(e)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(|e| total_degree(e)).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Multiplies by `x^shift`.
    pub fn shifted(&self, shift: &[u32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Re-embeds into a larger variable set, placing the old variables at
    /// `offset..offset+nvars`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = vec![0; nvars];
                v[offset..offset + e.len()].copy_from_slice(e);
                (v, c.clone())
            })
            .collect();
        Polynomial { nvars, terms }
    }

    /// Renders with the given variable names, highest degree first.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<(&Exponents, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| total_degree(b.0).cmp(&total_degree(a.0)).then(b.0.cmp(a.0)));
        let mut out = String::new();
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(e, names);
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{abs}*{mono}");
            }
        }
        out
    }
}

pub fn render_monomial(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(a, _)| **a > 0)
        .map(|(a, n)| if *a == 1 { n.clone() } else { format!("{n}^{a}") })
        .collect();
    parts.join("*")
}

/// All exponent vectors in `nvars` variables with total degree exactly `d`,
/// in descending lexicographic order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Exponents> {
    fn rec(nvars: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(nvars, left - a, cur, out);
            cur.pop();
        }
    }
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 4).len(), 5);
        assert_eq!(monomials_of_degree(1, 3), vec![vec![3]]);
    }

    #[test]
    fn rendering() {
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let mut p = Polynomial::zero(2);
        p.add_term(vec![2, 0], q(1));
        p.add_term(vec![1, 1], q(-3));
        assert_eq!(p.render(&names), "x^2 - 3*x*y");
        p.add_term(vec![2, 0], q(-1));
        assert_eq!(p.render(&names), "-3*x*y");
    }
}
