use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use freechaos::{enumerate_nc, oracle_moment, wigner_moment, Family, Law};
use freechaos_bench::symmetric_kernel;

fn partitions(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_nc");
    for m in [8usize, 10, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| enumerate_nc(black_box(m)).unwrap().len())
        });
    }
    group.finish();
}

fn moments(c: &mut Criterion) {
    let mut group = c.benchmark_group("wigner_moment");
    for (q, d, m) in [(2usize, 6usize, 8usize), (4, 4, 4), (4, 3, 6)] {
        let f = symmetric_kernel(q, d);
        group.bench_function(format!("q{q}_d{d}_m{m}"), |b| b.iter(|| wigner_moment(black_box(&f), m).unwrap().total));
    }
    let f = Family::Semicircle4 { lambda: 1.0 }.kernel(256).unwrap();
    group.bench_function("semicircle4_n256_m4", |b| b.iter(|| wigner_moment(black_box(&f), 4).unwrap().total));
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_moment");
    group.sample_size(10);
    for (q, d, m) in [(2usize, 3usize, 5usize), (4, 2, 5), (4, 3, 4)] {
        let f = symmetric_kernel(q, d);
        group.bench_function(format!("q{q}_d{d}_m{m}"), |b| b.iter(|| oracle_moment(black_box(&f), m, q * m).unwrap()));
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let law = Law::centered_free_poisson(0.5).unwrap();
    c.bench_function("quadrature_moment_mp_m6", |b| b.iter(|| law.quadrature_moment(black_box(6), 1e-12).unwrap()));
}

criterion_group!(benches, partitions, moments, oracle, quadrature);
criterion_main!(benches);
