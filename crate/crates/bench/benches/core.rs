use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use seshadri_bench::{challenge_class, challenge_system, six_point_class};
use seshadri_core::certificate::scan_box;
use seshadri_core::rational::frac;
use seshadri_core::shgh::DEFAULT_CHARACTERISTIC;
use seshadri_core::*;

fn catalog(c: &mut Criterion) {
    let mut g = c.benchmark_group("catalog");
    for (s, d) in [(6, 5), (8, 8), (9, 12)] {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("s{s}-d{d}")),
            &(s, d),
            |b, &(s, d)| b.iter(|| generate_catalog(SurfaceModel::new(s), d).unwrap()),
        );
    }
    g.finish();
}

fn zariski(c: &mut Criterion) {
    let cat = generate_catalog(SurfaceModel::new(9), 16).unwrap();
    let d = challenge_class();
    c.bench_function("decompose/challenge", |b| {
        b.iter(|| decompose(black_box(&d), &cat).unwrap())
    });
    let e = SurfaceModel::new(9).exceptional_sum();
    c.bench_function("walk/challenge", |b| {
        b.iter(|| walk_ray(black_box(&d), &e, &cat).unwrap())
    });
}

fn okounkov(c: &mut Criterion) {
    let cat = generate_catalog(SurfaceModel::new(6), 5).unwrap();
    let d = six_point_class();
    c.bench_function("body/six-point", |b| {
        b.iter(|| okounkov_body(black_box(&d), Flag::GeneralLine, &cat).unwrap())
    });
    c.bench_function("okfun/six-point-1/64", |b| {
        b.iter(|| {
            okounkov_function(black_box(&d), ValuationPoint::FlagPoint, &cat, &frac(1, 64)).unwrap()
        })
    });
}

fn oracle(c: &mut Criterion) {
    let l = challenge_system();
    c.bench_function("oracle/22-7^9", |b| {
        b.iter(|| oracle_dim(black_box(&l), DEFAULT_CHARACTERISTIC, 0).unwrap())
    });
}

fn certificate(c: &mut Criterion) {
    let mut g = c.benchmark_group("certificate");
    g.sample_size(10);
    g.bench_function("scan-box-50", |b| {
        b.iter(|| scan_box(9, &frac(8, 25), black_box(50)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, catalog, zariski, okounkov, oracle, certificate);
criterion_main!(benches);
