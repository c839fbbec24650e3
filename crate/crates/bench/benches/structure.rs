use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use syzygy_bench::{over_prime, FIBRE, R1, SQUARE};
use syzygy_core::modules::maximal_ideal;
use syzygy_core::structure::{
    decompose, golod_check, star_property_scan, summand_test, SyzygyTower,
};

fn decomposition(c: &mut Criterion) {
    let mut g = c.benchmark_group("decompose");
    g.sample_size(10);
    let a = over_prime(FIBRE);
    let m = maximal_ideal(&a);
    g.bench_function("m_fibre", |b| b.iter(|| black_box(decompose(&m, 7).unwrap())));
    let a = over_prime(R1);
    let s2 = SyzygyTower::new(&a).syzygy(2).clone();
    g.bench_function("syz2_r1", |b| b.iter(|| black_box(decompose(&s2, 7).unwrap())));
    g.finish();
}

fn summands(c: &mut Criterion) {
    let mut g = c.benchmark_group("summand_test");
    g.sample_size(10);
    let a = over_prime(SQUARE);
    let mut t = SyzygyTower::new(&a);
    let (s1, s3) = (t.syzygy(1).clone(), t.syzygy(3).clone());
    g.bench_function("square_1_3", |b| b.iter(|| black_box(summand_test(&s1, &s3, 7).unwrap())));
    let a = over_prime(R1);
    let mut t = SyzygyTower::new(&a);
    let (s1, s2) = (t.syzygy(1).clone(), t.syzygy(2).clone());
    g.bench_function("r1_1_2", |b| b.iter(|| black_box(summand_test(&s1, &s2, 7).unwrap())));
    g.finish();
}

fn verdicts(c: &mut Criterion) {
    let mut g = c.benchmark_group("verdicts");
    g.sample_size(10);
    let a = over_prime(R1);
    g.bench_function("golod_r1_6", |b| {
        b.iter(|| black_box(golod_check(&mut SyzygyTower::new(&a), 6).unwrap()))
    });
    let a = over_prime(FIBRE);
    g.bench_function("star_scan_fibre_3", |b| {
        b.iter(|| black_box(star_property_scan(&mut SyzygyTower::new(&a), 3, 7).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, decomposition, summands, verdicts);
criterion_main!(benches);
