//! Timings for the dynamics layer: exact rate evaluation, two-state path
//! sampling, and the full order-3 descent verification.

use criterion::{criterion_group, criterion_main, Criterion};
use qchir_core::dynamics::{self, TwoStateSpec, WeightFn};
use qchir_core::fixtures;

fn rates(c: &mut Criterion) {
    let z6 = fixtures::cyclic(6);
    let w = WeightFn::unit();
    c.bench_function("mirror_rate_cyclic6", |b| {
        b.iter(|| dynamics::mirror_rate(&z6, &w))
    });
}

fn sampling(c: &mut Criterion) {
    let spec = TwoStateSpec::new(1.0, 1.0, 1.0).unwrap();
    let grid = [0.0, 1.25, 2.5, 3.75, 5.0];
    let mut group = c.benchmark_group("sampling");
    group.sample_size(20);
    // One worker thread so the numbers measure the sampler, not the pool.
    group.bench_function("sample_two_state_10k_paths", |b| {
        b.iter(|| dynamics::sample_two_state_with_threads(&spec, 5.0, 10_000, 1, &grid, 1).unwrap())
    });
    group.finish();
}

fn descent(c: &mut Criterion) {
    let w = WeightFn::unit();
    let mut group = c.benchmark_group("descent");
    group.sample_size(10);
    group.bench_function("full_state_descent_order3", |b| {
        b.iter(|| {
            dynamics::full_state_descent_check_with_threads(3, &w, 1.0, 2_000, 1, 1)
                .unwrap()
                .pass
        })
    });
    group.finish();
}

criterion_group!(benches, rates, sampling, descent);
criterion_main!(benches);
