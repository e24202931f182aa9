//! Sequential vs parallel throughput of the certification kernels.
//!
//! With the default `parallel` feature the multi-worker runs use a rayon
//! pool; built with `--no-default-features` they fall back to the same
//! sequential path as `workers = 1`, so the two groups coincide.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sparkforge_core::certifier::{
    certify_at_lambda, certify_full_spark_symbolic, enumerate_subsets, subset_determinant,
};
use sparkforge_core::exactfield::rational;
use sparkforge_core::exec::default_workers;
use sparkforge_core::frames::{construct_w, FrameEnsemble};
use sparkforge_core::grouprep::{orbit_matrix_numeric, orbit_matrix_symbolic, OrbitGroup};

fn worker_counts() -> Vec<usize> {
    let max = default_workers();
    if max > 1 {
        vec![1, max]
    } else {
        vec![1]
    }
}

fn bench_certify_symbolic(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_symbolic_n5");
    group.sample_size(10);
    for workers in worker_counts() {
        let label = if workers == 1 { "sequential" } else { "parallel" };
        group.bench_with_input(BenchmarkId::new(label, workers), &workers, |b, &w| {
            b.iter(|| certify_full_spark_symbolic(5, w));
        });
    }
    group.finish();
}

fn bench_certify_at_lambda(c: &mut Criterion) {
    let lambda = rational(2, 1);
    let mut group = c.benchmark_group("certify_lambda2_n7");
    group.sample_size(10);
    for workers in worker_counts() {
        let label = if workers == 1 { "sequential" } else { "parallel" };
        group.bench_with_input(BenchmarkId::new(label, workers), &workers, |b, &w| {
            b.iter(|| certify_at_lambda(7, &lambda, w));
        });
    }
    group.finish();
}

fn bench_subset_kernel(c: &mut Criterion) {
    // The single-subset determinant kernel that dominates certification.
    let orbit = orbit_matrix_symbolic(7);
    let mixed: Vec<_> = enumerate_subsets(14, 7).skip(700).take(8).collect();
    c.bench_function("subset_determinant_n7_mixed", |b| {
        b.iter(|| {
            for sub in &mixed {
                criterion::black_box(subset_determinant(&orbit, sub));
            }
        });
    });
}

fn bench_numeric_spark(c: &mut Criterion) {
    let w = construct_w(5, 2.0);
    let orbit = orbit_matrix_numeric(5, &w, OrbitGroup::DihedralTime).unwrap();
    let frame = FrameEnsemble::from_orbit(&orbit);
    let mut group = c.benchmark_group("numeric_spark_n5");
    for workers in worker_counts() {
        let label = if workers == 1 { "sequential" } else { "parallel" };
        group.bench_with_input(BenchmarkId::new(label, workers), &workers, |b, &w| {
            b.iter(|| frame.numeric_spark_check(1e-10, 1_000_000, w).unwrap());
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_certify_symbolic,
    bench_certify_at_lambda,
    bench_subset_kernel,
    bench_numeric_spark
);
criterion_main!(benches);
