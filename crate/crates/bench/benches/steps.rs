use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use skewflow_bench::{identity_state, test_coefficient, skew_of_dim};
use skewflow_core::integrate::{cayley_step, propagate, rk2_closed_step, rk_step, IntegratorConfig};
use skewflow_core::linalg::expm;
use skewflow_core::{tableau, Method, OrthogonalState, StageSolver};

fn single_steps(c: &mut Criterion) {
    let s = test_coefficient();
    let q = identity_state();
    let mut group = c.benchmark_group("step_3x3");
    group.bench_function("cayley", |b| b.iter(|| cayley_step(black_box(&s), &q, 0.1)));
    group.bench_function("rk2_closed", |b| b.iter(|| rk2_closed_step(black_box(&s), &q, 0.1)));
    for name in ["midpoint", "gauss2", "rk4-classical"] {
        let t = tableau::builtin(name).unwrap();
        group.bench_function(BenchmarkId::new("tableau", name), |b| {
            b.iter(|| rk_step(&t, black_box(&s), &q, 0.1, &StageSolver::Direct))
        });
    }
    let g = tableau::builtin("gauss2").unwrap();
    group.bench_function("gauss2_fixed_point", |b| {
        b.iter(|| rk_step(&g, black_box(&s), &q, 0.1, &StageSolver::fixed_point()))
    });
    group.finish();
}

fn gauss_by_dimension(c: &mut Criterion) {
    let t = tableau::builtin("gauss2").unwrap();
    let mut group = c.benchmark_group("gauss2_by_dim");
    for dim in [2, 3, 6, 12] {
        let s = skew_of_dim(dim);
        let q = OrthogonalState::identity(dim, 0.0);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |b, _| {
            b.iter(|| rk_step(&t, black_box(&s), &q, 0.1, &StageSolver::Direct))
        });
    }
    group.finish();
}

fn exact_flow(c: &mut Criterion) {
    let s3 = test_coefficient();
    let s6 = skew_of_dim(6);
    c.bench_function("expm_rotation_3x3", |b| b.iter(|| expm(black_box(&s3), 0.1)));
    c.bench_function("expm_taylor_6x6", |b| b.iter(|| expm(black_box(&s6), 0.1)));
}

fn reference_run(c: &mut Criterion) {
    let s = test_coefficient();
    let q = identity_state();
    let mut group = c.benchmark_group("propagate_2000s");
    group.sample_size(10);
    for method in [Method::CayleyMidpoint, Method::Rk2Closed] {
        let cfg = IntegratorConfig::new(method.clone(), 0.1).unwrap();
        group.bench_function(method.label(), |b| {
            b.iter(|| propagate(&cfg, black_box(&s), &q, 2000.0, 100))
        });
    }
    group.finish();
}

criterion_group!(benches, single_steps, gauss_by_dimension, exact_flow, reference_run);
criterion_main!(benches);
