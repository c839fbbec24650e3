use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use syzygy_bench::{over_prime, over_q, random_sparse, R1, R2};
use syzygy_core::koszul::koszul_profile;
use syzygy_core::modules::{resolve, residue_field};
use syzygy_core::{PrimeField, Rationals};

fn rank_and_kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref_kernel");
    for n in [64, 256] {
        let fp = random_sparse(PrimeField::new(101).unwrap(), n, n + n / 4, 0.05, 1);
        g.bench_with_input(BenchmarkId::new("F101", n), &fp, |b, m| b.iter(|| black_box(m.rref_kernel())));
        let q = random_sparse(Rationals, n / 2, n / 2 + n / 8, 0.05, 1);
        g.bench_with_input(BenchmarkId::new("Q", n / 2), &q, |b, m| b.iter(|| black_box(m.rref_kernel())));
    }
    g.finish();
}

fn resolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("resolve_k");
    g.sample_size(10);
    for (name, text) in [("r1", R1), ("r2", R2)] {
        let a = over_prime(text);
        let k = residue_field(&a);
        g.bench_function(BenchmarkId::new("F101", name), |b| b.iter(|| black_box(resolve(&k, 5))));
    }
    let a = over_q(R1);
    let k = residue_field(&a);
    g.bench_function(BenchmarkId::new("Q", "r1"), |b| b.iter(|| black_box(resolve(&k, 5))));
    g.finish();
}

fn koszul(c: &mut Criterion) {
    let a = over_prime(R1);
    let res = resolve(&residue_field(&a), 3);
    let s3 = res.syzygy(3).clone();
    c.bench_function("koszul_profile/syz3_r1", |b| {
        b.iter(|| black_box(koszul_profile(&s3.ungraded())))
    });
}

criterion_group!(benches, rank_and_kernel, resolution, koszul);
criterion_main!(benches);
