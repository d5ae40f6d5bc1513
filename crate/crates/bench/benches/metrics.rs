use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use uwrelay_bench::scenario;
use uwrelay_core::metrics::{
    asep_e2e, asep_e2e_quadrature, capacity_closed_form, capacity_quadrature, outage_asymptotic, outage_exact,
    outage_exact_with,
};
use uwrelay_core::specfun::ContourConfig;

const ROWS: [&str; 2] = ["salty-weak", "fresh-severe"];

fn outage(c: &mut Criterion) {
    let mut group = c.benchmark_group("outage");
    let contour = ContourConfig::univariate().contour_only();
    for row in ROWS {
        let s = scenario(row, 2.0, 1.0, 20.0);
        group.bench_with_input(BenchmarkId::new("exact", row), &s, |b, s| {
            b.iter(|| outage_exact(black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("exact_contour", row), &s, |b, s| {
            b.iter(|| outage_exact_with(black_box(s), &contour).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("asymptotic", row), &s, |b, s| {
            b.iter(|| outage_asymptotic(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn asep(c: &mut Criterion) {
    let mut group = c.benchmark_group("asep");
    let cfg = ContourConfig::univariate();
    for row in ROWS {
        let s = scenario(row, 3.5, 0.8, 20.0);
        group.bench_with_input(BenchmarkId::new("closed_form", row), &s, |b, s| {
            b.iter(|| asep_e2e(black_box(s), &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("quadrature", row), &s, |b, s| {
            b.iter(|| asep_e2e_quadrature(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn capacity(c: &mut Criterion) {
    let mut group = c.benchmark_group("capacity");
    group.sample_size(10);
    let s = scenario("salty-weak", 2.0, 1.0, 20.0);
    group.bench_function("closed_form", |b| {
        b.iter(|| capacity_closed_form(black_box(&s)).unwrap())
    });
    group.bench_function("quadrature", |b| b.iter(|| capacity_quadrature(black_box(&s)).unwrap()));
    group.finish();
}

criterion_group!(benches, outage, asep, capacity);
criterion_main!(benches);
