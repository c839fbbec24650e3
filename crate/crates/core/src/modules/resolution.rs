use serde::{Deserialize, Serialize};

use super::{add_degree, free_module_shifted, ActionModule};
use crate::algebra::Degree;
use crate::arith::{kernel_of_columns, Field, SparseVec, Subspace};

/// A map `R^source -> R^target` between free modules. Column `c` is the
/// image of the `c`-th basis element, stored in `R^target` coordinates
/// (index `j * dim R + r` for component `j`, algebra basis element `r`).
#[derive(Debug, Clone)]
pub struct FreePresentation<F: Field> {
    pub target_rank: usize,
    pub source_rank: usize,
    pub algebra_dim: usize,
    pub columns: Vec<SparseVec<F>>,
}

impl<F: Field> FreePresentation<F> {
    /// Entry `(j, c)` as an algebra element.
    pub fn entry(&self, j: usize, c: usize) -> SparseVec<F> {
        let lo = j * self.algebra_dim;
        let hi = lo + self.algebra_dim;
        self.columns[c]
            .iter()
            .filter(|(i, _)| (lo..hi).contains(i))
            .map(|(i, x)| (i - lo, x.clone()))
            .collect()
    }

    /// Every entry lies in `m`: no entry has a unit component.
    pub fn is_minimal(&self) -> bool {
        self.columns
            .iter()
            .all(|col| col.iter().all(|(i, _)| i % self.algebra_dim != 0))
    }
}

/// One step of a minimal resolution: the chosen generators of `M`, the
/// kernel of the cover `R^b -> M`, and that kernel as a module.
#[derive(Debug, Clone)]
pub struct SyzygyStep<F: Field> {
    pub generators: Vec<usize>,
    pub generator_degrees: Option<Vec<Degree>>,
    pub kernel: Subspace<F>,
    pub syzygy: ActionModule<F>,
}

/// First syzygy of `m` with respect to its minimal generators.
pub fn syzygy_step<F: Field>(m: &ActionModule<F>, label: impl Into<String>) -> SyzygyStep<F> {
    let alg = m.algebra().clone();
    let f = alg.field().clone();
    let d = alg.dim();
    let gens: Vec<usize> = m.generator_indices().to_vec();
    let gen_degrees: Option<Vec<Degree>> = m
        .degrees()
        .map(|deg| gens.iter().map(|&g| deg[g].clone()).collect());
    let mut columns: Vec<SparseVec<F>> = Vec::with_capacity(gens.len() * d);
    for &g in &gens {
        columns.extend(m.orbit(&vec![(g, f.one())]));
    }
    let col_keys: Option<Vec<Degree>> = match (&gen_degrees, alg.degrees()) {
        (Some(gd), Some(bd)) => Some(
            gd.iter()
                .flat_map(|s| bd.iter().map(move |b| add_degree(s, b)))
                .collect(),
        ),
        _ => None,
    };
    let kernel = match (&col_keys, m.degrees()) {
        (Some(ck), Some(rk)) => kernel_of_columns(&f, m.dim(), &columns, Some((rk, &ck[..]))),
        _ => kernel_of_columns::<F, Degree>(&f, m.dim(), &columns, None),
    };
    let cover = free_module_shifted(&alg, gens.len(), gen_degrees.as_deref(), String::new());
    let syzygy = cover.restrict(&kernel, label);
    SyzygyStep {
        generators: gens,
        generator_degrees: gen_degrees,
        kernel,
        syzygy,
    }
}

/// Betti numbers of a module as a JSON-friendly record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub label: String,
    pub algebra_hash: String,
    pub values: Vec<usize>,
}

/// A minimal free resolution computed to a fixed length.
#[derive(Debug, Clone)]
pub struct FreeResolution<F: Field> {
    /// `syzygies[i]` is `syz_i(M)`; `syzygies[0]` is `M` itself.
    pub syzygies: Vec<ActionModule<F>>,
    /// `differentials[i]` is `d_{i+1}: R^{beta_{i+1}} -> R^{beta_i}`.
    pub differentials: Vec<FreePresentation<F>>,
    /// Generator degrees of `F_i` when graded.
    pub generator_degrees: Vec<Option<Vec<Degree>>>,
    pub betti: Vec<usize>,
}

impl<F: Field> FreeResolution<F> {
    pub fn module(&self) -> &ActionModule<F> {
        &self.syzygies[0]
    }

    pub fn length(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn syzygy(&self, n: usize) -> &ActionModule<F> {
        &self.syzygies[n]
    }

    /// Extends the resolution so that `beta_0..beta_n` and `syz_0..syz_n`
    /// are available.
    pub fn extend_to(&mut self, n: usize) {
        let base = self.syzygies[0].label().to_string();
        while self.length() < n {
            let i = self.length();
            let step = syzygy_step(&self.syzygies[i], format!("syz_{}({base})", i + 1));
            let alg_dim = self.syzygies[0].algebra().dim();
            let next = step.syzygy;
            let gens = next.generator_indices().to_vec();
            let columns = gens.iter().map(|&g| step.kernel.basis()[g].clone()).collect();
            let degrees = next
                .degrees()
                .map(|deg| gens.iter().map(|&g| deg[g].clone()).collect());
            self.differentials.push(FreePresentation {
                target_rank: self.betti[i],
                source_rank: gens.len(),
                algebra_dim: alg_dim,
                columns,
            });
            self.betti.push(gens.len());
            self.generator_degrees.push(degrees);
            self.syzygies.push(next);
        }
    }

    pub fn betti_table(&self) -> BettiTable {
        let m = self.module();
        BettiTable {
            label: m.label().to_string(),
            algebra_hash: m.algebra().hash().to_string(),
            values: self.betti.clone(),
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().all(FreePresentation::is_minimal)
    }
}

/// Minimal free resolution of `m` with `n` syzygy steps.
pub fn resolve<F: Field>(m: &ActionModule<F>, n: usize) -> FreeResolution<F> {
    let gen_degrees = m.degrees().map(|deg| {
        m.generator_indices()
            .iter()
            .map(|&g| deg[g].clone())
            .collect()
    });
    let mut res = FreeResolution {
        syzygies: vec![m.clone()],
        differentials: Vec::new(),
        generator_degrees: vec![gen_degrees],
        betti: vec![m.num_generators()],
    };
    res.extend_to(n);
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::tests::alg_q;
    use crate::modules::{free_module, residue_field};

    fn betti_of_k(text: &str, n: usize) -> Vec<usize> {
        let a = alg_q(text);
        let res = resolve(&residue_field(&a), n);
        assert!(res.is_minimal());
        for s in &res.syzygies {
            s.check().unwrap();
        }
        res.betti
    }

    #[test]
    fn residue_field_betti_numbers() {
        assert_eq!(betti_of_k("vars x,y; rels x^2,x*y,y^2;", 4), vec![1, 2, 4, 8, 16]);
        assert_eq!(betti_of_k("vars x,y; rels x^2,y^2;", 4), vec![1, 2, 3, 4, 5]);
        assert_eq!(betti_of_k("vars x; rels x^2;", 4), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn ungraded_path_agrees() {
        // a non-homogeneous presentation of k[x,y]/(x^2,y^2) in disguise
        assert_eq!(betti_of_k("vars x,y; rels x^2 + y^3, y^2;", 3), vec![1, 2, 3, 4]);
    }

    #[test]
    fn syzygy_examples() {
        let a = alg_q("vars x; rels x^2;");
        let s = syzygy_step(&residue_field(&a), "syz_1(k)");
        assert_eq!(s.syzygy.dim(), 1);
        let b = alg_q("vars x,y; rels x^2,x*y,y^2;");
        let s = syzygy_step(&residue_field(&b), "m");
        assert_eq!(s.syzygy.dim(), 2);
        assert_eq!(s.syzygy.socle().len(), 2);
        let s = syzygy_step(&free_module(&b, 2), "0");
        assert_eq!(s.syzygy.dim(), 0);
        let s = syzygy_step(&free_module(&b, 0), "0");
        assert_eq!(s.syzygy.dim(), 0);
    }
}
