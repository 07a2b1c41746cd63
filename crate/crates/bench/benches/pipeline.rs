use std::hint::black_box;

use bcurve_bench::{pairs, series};
use bcurve_core::inverse::roundtrip;
use bcurve_core::spectral::{divisor_points, spectrum};
use bcurve_core::{DivisorTolerances, ExactScalar, GenusZeroSpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn series_ops(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    for n in [16, 48] {
        let (a, b) = series(n);
        g.bench_with_input(BenchmarkId::new("mul", n), &n, |bch, _| bch.iter(|| black_box(&a) * black_box(&b)));
        g.bench_with_input(BenchmarkId::new("invert", n), &n, |bch, _| bch.iter(|| black_box(&a).invert()));
    }
    g.finish();
}

fn operators(c: &mut Criterion) {
    let mut g = c.benchmark_group("operators");
    for (name, p, q) in pairs(48) {
        g.bench_function(BenchmarkId::new("commutator", name), |b| b.iter(|| black_box(&p).commutator(&q)));
    }
    g.finish();
}

fn direct(c: &mut Criterion) {
    let mut g = c.benchmark_group("direct");
    g.sample_size(20);
    for (name, p, q) in pairs(48) {
        g.bench_function(BenchmarkId::new("spectrum", name), |b| b.iter(|| spectrum(black_box(&p), &q)));
        let s = spectrum(&p, &q).expect("pairs commute");
        g.bench_function(BenchmarkId::new("divisor", name), |b| {
            b.iter(|| divisor_points(&s.m_matrix, &s.curve, DivisorTolerances::default()))
        });
    }
    g.finish();
}

fn inverse(c: &mut Criterion) {
    let mut g = c.benchmark_group("inverse");
    g.sample_size(10);
    let z = ExactScalar::zero();
    let specs = [
        ("cusp", GenusZeroSpec::cusp(1.into()).expect("valid")),
        ("node", GenusZeroSpec::node(1.into(), 2.into()).expect("valid")),
    ];
    for (name, spec) in specs {
        g.bench_function(BenchmarkId::new("roundtrip_24", name), |b| {
            b.iter(|| roundtrip(black_box(&spec), &z, 24, DivisorTolerances::default()))
        });
    }
    g.finish();
}

criterion_group!(benches, series_ops, operators, direct, inverse);
criterion_main!(benches);
