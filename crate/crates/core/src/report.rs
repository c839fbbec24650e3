//! Shared pieces of the JSON reports.

use serde::{Deserialize, Serialize};

use crate::arith::{ExactMatrix, Field};

/// One named assertion inside a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, holds: bool) -> Self {
        Check {
            name: name.into(),
            holds,
            detail: String::new(),
        }
    }

    pub fn with_detail(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

pub fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}

/// A matrix in sparse triplet form; entries are rendered exactly (`3`,
/// `-1/2`, or a residue in `[0, p)`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl SparseMatrixRecord {
    pub fn from_matrix<F: Field>(m: &ExactMatrix<F>) -> Self {
        SparseMatrixRecord {
            rows: m.rows(),
            cols: m.cols(),
            entries: m
                .triplets()
                .into_iter()
                .map(|(i, j, x)| (i, j, x.to_string()))
                .collect(),
        }
    }
}

/// A list of checks against one algebra or module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaReport {
    pub name: String,
    pub label: String,
    pub algebra_hash: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl FormulaReport {
    pub fn new(
        name: impl Into<String>,
        label: impl Into<String>,
        algebra_hash: impl Into<String>,
        checks: Vec<Check>,
    ) -> Self {
        let passed = all_hold(&checks);
        FormulaReport {
            name: name.into(),
            label: label.into(),
            algebra_hash: algebra_hash.into(),
            checks,
            passed,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
