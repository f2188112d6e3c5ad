use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lieinv_bench::{frame, SMALL};
use lieinv_core::{
    compute_invariant, generate_terms, Family, LieAlgebraTable, RunOptions, Scope, SeedSpec,
};

fn chevalley(c: &mut Criterion) {
    let mut g = c.benchmark_group("chevalley");
    for (f, l) in [(Family::F, 4), (Family::E, 6), (Family::E, 8)] {
        g.bench_function(BenchmarkId::from_parameter(format!("{f}{l}")), |b| {
            b.iter(|| LieAlgebraTable::new(black_box(f), l).unwrap())
        });
    }
    g.finish();
}

fn kostant_frame(c: &mut Criterion) {
    let mut g = c.benchmark_group("frame");
    g.sample_size(10);
    for (f, l) in [(Family::G, 2), (Family::F, 4), (Family::E, 6)] {
        let alg = LieAlgebraTable::new(f, l).unwrap();
        g.bench_function(BenchmarkId::from_parameter(alg.label()), |b| {
            b.iter(|| lieinv_core::KostantFrame::new(black_box(&alg)).unwrap())
        });
    }
    g.finish();
}

fn terms(c: &mut Criterion) {
    let g2 = frame(Family::G, 2);
    let f4 = frame(Family::F, 4);
    c.bench_function("terms/G2 d=6 full", |b| {
        b.iter(|| generate_terms(&g2, black_box(6), Scope::Full))
    });
    c.bench_function("terms/F4 d=12 borel", |b| {
        b.iter(|| generate_terms(&f4, black_box(12), Scope::Borel))
    });
}

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("top-invariant");
    g.sample_size(10);
    for (f, l) in SMALL {
        let fr = frame(f, l);
        let seeds = SeedSpec::primitive(&fr, l).unwrap();
        for scope in [Scope::Borel, Scope::Full] {
            g.bench_function(BenchmarkId::new(fr.alg.label(), scope), |b| {
                b.iter(|| compute_invariant(&fr, &seeds, scope, &RunOptions::default()).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, chevalley, kostant_frame, terms, invariants);
criterion_main!(benches);
