//! Sequential against parallel execution for the workloads that fan out.
//!
//! ```bash
//! cargo bench -p hyperclust --bench execution
//! cargo bench -p hyperclust --bench execution --no-default-features   # rayon compiled out
//! ```

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hyperclust::experiments::converge::{convergence_trace, ConvergenceConfig};
use hyperclust::experiments::phase::{phase_transition, GridConfig};
use hyperclust::experiments::{InitStrategy, Instance, Range};
use hyperclust::linalg::{kmeans, similarity_matrix, top_eigenvectors_dense, KMeansOptions};
use hyperclust::sampler::LogRegimeParams;
use hyperclust::{score, Execution};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn label(exec: Execution) -> &'static str {
    match exec {
        Execution::Sequential => "sequential",
        Execution::Parallel => "parallel",
    }
}

fn phase_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("phase_grid");
    group.sample_size(10);
    group.measurement_time(Duration::from_secs(20));
    for exec in MODES {
        let cfg = GridConfig {
            n: 60,
            d: 3,
            k: 2,
            alpha: Range::new(10.0, 40.0, 10.0),
            beta: Range::new(0.0, 4.0, 4.0),
            trials: 4,
            init: InitStrategy::Random,
            max_iters: Some(20),
            seed: 7,
            execution: exec,
        };
        group.bench_function(label(exec), |b| b.iter(|| black_box(phase_transition(&cfg).unwrap())));
    }
    group.finish();
}

fn kmeans_restarts(c: &mut Criterion) {
    let mut group = c.benchmark_group("kmeans_restarts");
    let params = LogRegimeParams { n: 240, d: 3, k: 4, alpha: 120.0, beta: 20.0 };
    let inst = Instance::sample(params, 3).unwrap();
    let emb = top_eigenvectors_dense(&similarity_matrix(&inst.graph), 4);
    for exec in MODES {
        let opts = KMeansOptions { execution: exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(label(exec)), &opts, |b, opts| {
            b.iter(|| black_box(kmeans(&emb, 4, 11, *opts)))
        });
    }
    group.finish();
}

fn convergence_restarts(c: &mut Criterion) {
    let mut group = c.benchmark_group("convergence_restarts");
    group.sample_size(10);
    for exec in MODES {
        let cfg = ConvergenceConfig {
            params: LogRegimeParams { n: 240, d: 3, k: 2, alpha: 33.0, beta: 8.0 },
            restarts: 8,
            max_iters: 30,
            early_stop: true,
            seed: 5,
            execution: exec,
        };
        group.bench_function(label(exec), |b| b.iter(|| black_box(convergence_trace(&cfg).unwrap())));
    }
    group.finish();
}

fn scoring(c: &mut Criterion) {
    let mut group = c.benchmark_group("multilinear_score");
    for n in [120, 240, 480] {
        let params = LogRegimeParams { n, d: 3, k: 2, alpha: 33.0, beta: 8.0 };
        let inst = Instance::sample(params, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| black_box(score::multilinear_score(&inst.graph, &inst.truth).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, phase_grid, kmeans_restarts, convergence_restarts, scoring);
criterion_main!(benches);
