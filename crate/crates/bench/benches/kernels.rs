use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shl_bench::{input, CASES};
use shl_core::certify::certify_level;
use shl_core::exact::rank;
use shl_core::filtration::HodgeEngine;
use shl_core::graded::{milnor_data, top_scaled};
use shl_core::residue::pairing_perfectness;
use shl_core::{rat, Cutoffs, DegreeIndex, ModuleTag, QMatrix};

fn bench_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    for n in [8usize, 16, 32] {
        // Hilbert-like matrix: dense, full rank, growing entries.
        let entries = (0..n * n)
            .map(|k| rat(1, (k / n + k % n + 1) as i64))
            .collect();
        let m = QMatrix::new(n, n, entries).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| rank(black_box(m)))
        });
    }
    group.finish();
}

fn bench_milnor(c: &mut Criterion) {
    let mut group = c.benchmark_group("milnor_data");
    group.sample_size(20);
    for (name, f, w) in CASES {
        let (f, w) = input(f, w);
        group.bench_function(name, |b| b.iter(|| milnor_data(black_box(&f), &w).unwrap()));
    }
    group.finish();
}

fn bench_pairing(c: &mut Criterion) {
    let (f, w) = input("x1^4+x2^4+x3^4", "1/4,1/4,1/4");
    let top = DegreeIndex::new(top_scaled(&w), &w);
    c.bench_function("pairing_perfectness/quartic top", |b| {
        b.iter(|| pairing_perfectness(black_box(&f), &w, top))
    });
}

fn bench_hodge(c: &mut Criterion) {
    let (f, w) = input("x1^3+x2^3+x3^3", "1/3,1/3,1/3");
    let cutoffs = Cutoffs::default_for(&w);
    c.bench_function("hodge_table/cubic Mdoubleprime", |b| {
        b.iter(|| {
            HodgeEngine::new(&f, &w, ModuleTag::Mdoubleprime, cutoffs)
                .unwrap()
                .table()
                .unwrap()
        })
    });
}

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_level");
    group.sample_size(10);
    let (f, w) = input("x1^3+x2^3+x3^3", "1/3,1/3,1/3");
    group.bench_function("cubic Mprime r=1", |b| {
        b.iter(|| certify_level(&f, &w, ModuleTag::Mprime, 1, Cutoffs::default_for(&w)))
    });
    let (f, w) = input("x1^6+x2^4+x3^4+x4^4+x1^2*x2*x3*x4", "1/6,1/4,1/4,1/4");
    group.bench_function("quartic-sextic M r=1", |b| {
        b.iter(|| certify_level(&f, &w, ModuleTag::M, 1, Cutoffs::default_for(&w)))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_rank,
    bench_milnor,
    bench_pairing,
    bench_hodge,
    bench_certify
);
criterion_main!(benches);
