//! Parallel versus sequential lazy scan on a mid-size refinement.
//!
//! The depth-1 complex for k = 3, n = 2 has 81 * 120 representative facets,
//! enough work to see the rayon split pay off while staying under a second
//! per iteration on one core.

use criterion::{criterion_group, criterion_main, Criterion};

use condiv_core::{scan_lazy, scan_lazy_sequential, Group, LazyComplex, Measure, ScanMode};
use condiv_core::rational::rat;

fn fixtures() -> (LazyComplex, Vec<Measure>) {
    let group = Group::cyclic(3).unwrap();
    let measures = vec![
        Measure::uniform(),
        Measure::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![rat(3, 2), rat(1, 2)]).unwrap(),
    ];
    (LazyComplex::new(&group, 4, 1), measures)
}

fn bench_scans(c: &mut Criterion) {
    let (lazy, measures) = fixtures();
    let mut group = c.benchmark_group("lazy_scan");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| scan_lazy_sequential(&lazy, &measures, ScanMode::OrbitPruned).unwrap())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| scan_lazy(&lazy, &measures, ScanMode::OrbitPruned).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_scans);
criterion_main!(benches);
