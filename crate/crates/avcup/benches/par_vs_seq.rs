//! Parallel vs sequential timing of the two data-parallel hot paths:
//! the class-group relation search and the corpus scan. With the
//! `parallel` feature (default) the sequential baseline runs the same
//! code inside a one-thread pool; without it both measurements take the
//! sequential fallback.

use criterion::{criterion_group, criterion_main, Criterion};

use avcup::classunit::class_group;
use avcup::kim::{scan, ScanConfig};
use avcup::nf::NumberField;
use avcup::poly::IntPoly;

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T>(_n: usize, f: impl FnOnce() -> T) -> T {
    f()
}

fn bench_class_group(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_group");
    group.sample_size(10);
    // Q(sqrt(-1155)): eight 2-torsion classes, a busy relation search.
    let quad = NumberField::make(IntPoly::from_i64(&[289, -1, 1])).unwrap();
    let quartic = NumberField::make(IntPoly::from_i64(&[25, 0, 13, 0, 1])).unwrap();
    group.bench_function("imag_quadratic_disc_m1155/parallel", |b| {
        b.iter(|| class_group(&quad, 1).unwrap().h.clone())
    });
    group.bench_function("imag_quadratic_disc_m1155/sequential", |b| {
        b.iter(|| with_threads(1, || class_group(&quad, 1).unwrap().h.clone()))
    });
    group.bench_function("quartic_disc_4761/parallel", |b| {
        b.iter(|| class_group(&quartic, 1).unwrap().h.clone())
    });
    group.bench_function("quartic_disc_4761/sequential", |b| {
        b.iter(|| with_threads(1, || class_group(&quartic, 1).unwrap().h.clone()))
    });
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    let cfg = ScanConfig {
        disc_lo: -40,
        disc_hi: -3,
        n: 2,
        seed: 1,
        cache: None,
    };
    group.bench_function("disc_-40..-3_n2/parallel", |b| {
        b.iter(|| scan(&cfg).unwrap().len())
    });
    group.bench_function("disc_-40..-3_n2/sequential", |b| {
        b.iter(|| with_threads(1, || scan(&cfg).unwrap().len()))
    });
    group.finish();
}

criterion_group!(benches, bench_class_group, bench_scan);
criterion_main!(benches);
