use proptest::prelude::*;
use syzygy_core::corpus::{sample_presentation, sample_rng, AnyAlgebra, ScanConfig};
use syzygy_core::koszul::{
    koszul_profile, profile_invariants, verify_low_syzygy_profiles, verify_syzygy_profile_bounds,
    verify_top_koszul_homology,
};
use syzygy_core::modules::{free_module, maximal_ideal, residue_field};
use syzygy_core::structure::{
    bn_hml_table, decompose, golod_check, serre_bound_check, simple_summand_test, summand_test,
    verify_golod_decomposition, DecompositionMode, GolodReport, SyzygyTower,
};
use syzygy_core::{with_algebra, FieldSpec};

fn config(e: usize, max_dim: usize) -> ScanConfig {
    ScanConfig {
        field: "F 101".into(),
        e,
        vary_e: true,
        max_degree: 4,
        generators: (0, 4),
        samples: 1,
        seed: 0,
        max_dim,
        checks: Vec::new(),
        precision: None,
        max_socle_degree: None,
    }
}

fn algebra(seed: u64, e: usize, max_dim: usize, field: FieldSpec) -> AnyAlgebra {
    let cfg = config(e, max_dim);
    let p = sample_presentation(&cfg, field, &mut sample_rng(seed, 0));
    AnyAlgebra::build(&p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn algebra_axioms(seed in any::<u64>()) {
        let alg = algebra(seed, 3, 20, FieldSpec::PrimeField(101));
        with_algebra!(&alg, a => {
            prop_assert_eq!(a.hilbert().iter().sum::<usize>(), a.dim());
            prop_assert_eq!(a.hilbert()[1], a.embedding_dim());
            prop_assert!(free_module(a, 1).check().is_ok());
            prop_assert_eq!(a.is_gorenstein(), a.socle().len() == 1);
        });
    }

    #[test]
    fn koszul_profiles_are_consistent(seed in any::<u64>()) {
        let alg = algebra(seed, 3, 16, FieldSpec::PrimeField(101));
        with_algebra!(&alg, a => {
            let mut t = SyzygyTower::new(a);
            for n in 0..=3 {
                let checks = profile_invariants(t.syzygy(n));
                prop_assert!(checks.iter().all(|c| c.holds), "{:?}", checks);
                prop_assert_eq!(koszul_profile(t.syzygy(n)).euler_characteristic(), 0);
            }
            prop_assert!(verify_syzygy_profile_bounds(&maximal_ideal(a), 3).passed);
            prop_assert!(verify_low_syzygy_profiles(a).passed);
            prop_assert!(verify_top_koszul_homology(a, 4).passed);
        });
    }

    #[test]
    fn serre_slack_and_condition_table(seed in any::<u64>()) {
        let alg = algebra(seed, 3, 16, FieldSpec::PrimeField(101));
        with_algebra!(&alg, a => {
            let mut t = SyzygyTower::new(a);
            // a negative slack is an error, so success means all slacks are >= 0
            let s = serre_bound_check(&mut t, 6).unwrap();
            let g: GolodReport = golod_check(&mut t, 6).unwrap();
            prop_assert_eq!(g.is_golod(), s.slacks.iter().all(|&x| x == 0));
            let table = bn_hml_table(&mut t, 4, 1);
            prop_assert!(table.passed, "{:?}", table.checks);
            prop_assert!(table.equivalences.iter().all(|r| r.a == r.b && r.b == r.c));
            prop_assert!(table.b[0]);
        });
    }

    #[test]
    fn golod_round_trip(seed in any::<u64>()) {
        let alg = algebra(seed, 3, 14, FieldSpec::PrimeField(101));
        with_algebra!(&alg, a => {
            let e = a.embedding_dim();
            let mut t = SyzygyTower::new(a);
            let r = verify_golod_decomposition(&mut t, 2, e + 4, DecompositionMode::Numeric, seed)
                .unwrap();
            prop_assert!(r.consistent, "{:?}", r);
        });
    }

    #[test]
    fn certificates_are_sound(seed in any::<u64>()) {
        let alg = algebra(seed, 2, 10, FieldSpec::PrimeField(101));
        with_algebra!(&alg, a => {
            let mut t = SyzygyTower::new(a);
            for n in 1..=2 {
                let d = decompose(t.syzygy(n), seed).unwrap();
                let checks = d.verify();
                prop_assert!(checks.iter().all(|c| c.holds), "{:?}", checks);
                let cert = simple_summand_test(t.syzygy(n));
                if cert.is_certificate() {
                    prop_assert!(cert.verify(&residue_field(a), t.syzygy(n)));
                }
            }
            let (s1, s2) = (t.syzygy(1).clone(), t.syzygy(2).clone());
            let cert = summand_test(&s1, &s2, seed).unwrap();
            if cert.is_certificate() {
                prop_assert!(cert.verify(&s1, &s2));
            }
        });
    }

    #[test]
    fn simple_summands_do_not_depend_on_field(seed in any::<u64>()) {
        let q = algebra(seed, 3, 14, FieldSpec::Rationals);
        let p = algebra(seed, 3, 14, FieldSpec::PrimeField(101));
        let hits = |alg: &AnyAlgebra| with_algebra!(alg, a => {
            let mut t = SyzygyTower::new(a);
            (1..=3).map(|n| simple_summand_test(t.syzygy(n)).is_certificate()).collect::<Vec<_>>()
        });
        prop_assert_eq!(hits(&q), hits(&p));
    }

    #[test]
    fn reports_round_trip_through_json(seed in any::<u64>()) {
        let alg = algebra(seed, 3, 14, FieldSpec::PrimeField(101));
        with_algebra!(&alg, a => {
            let mut t = SyzygyTower::new(a);
            let g = golod_check(&mut t, 5).unwrap();
            let text = serde_json::to_string(&g).unwrap();
            let back: GolodReport = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &g);
            let d = decompose(t.syzygy(1), seed).unwrap().report();
            let text = serde_json::to_string(&d).unwrap();
            prop_assert_eq!(serde_json::from_str::<syzygy_core::structure::DecompositionReport>(&text).unwrap(), d);
        });
    }
}
