//! Wall-clock timing of the solve, sampling excluded.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::experiments::Instance;
use crate::init;
use crate::sampler::LogRegimeParams;
use crate::seeds::{self, Stream};
use crate::solver::{self, SolveOptions};

#[derive(Clone, Debug)]
pub struct TimingConfig {
    pub params: Vec<LogRegimeParams>,
    /// Power iterations per timed run; early stopping is off while timing.
    pub timed_iterations: usize,
    /// Timed runs per configuration; the fastest is reported.
    pub repetitions: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub edges: usize,
    /// Iterations to a fixed point from the same random start.
    pub iterations_to_fixed_point: usize,
    pub converged: bool,
    pub timed_iterations: usize,
    pub total_ms: f64,
    pub per_iteration_ms: f64,
}

pub fn timing_benchmark(cfg: &TimingConfig) -> Result<Vec<TimingRow>> {
    if cfg.timed_iterations == 0 || cfg.repetitions == 0 {
        return Err(invalid("timing needs at least one iteration and one repetition"));
    }
    cfg.params
        .iter()
        .enumerate()
        .map(|(idx, &params)| {
            let seed = seeds::task_seed(cfg.seed, idx as u64, 0);
            let inst = Instance::sample(params, seed)?;
            let h0 = init::random_init(params.n, params.k, seeds::derive(seed, Stream::Init))?;
            let stopped = solver::ptpm(&inst.graph, &h0, Some(100), &SolveOptions::default())?;

            let free_running = SolveOptions {
                early_stop: false,
                ..Default::default()
            };
            let mut best = f64::INFINITY;
            for _ in 0..cfg.repetitions {
                let clock = Instant::now();
                let r = solver::ptpm(&inst.graph, &h0, Some(cfg.timed_iterations), &free_running)?;
                let ms = clock.elapsed().as_secs_f64() * 1e3;
                debug_assert_eq!(r.iterations_run, cfg.timed_iterations);
                best = best.min(ms);
            }
            Ok(TimingRow {
                n: params.n,
                d: params.d,
                k: params.k,
                alpha: params.alpha,
                beta: params.beta,
                edges: inst.graph.num_edges(),
                iterations_to_fixed_point: stopped.iterations_run,
                converged: stopped.converged_by_fixed_point,
                timed_iterations: cfg.timed_iterations,
                total_ms: best,
                per_iteration_ms: best / cfg.timed_iterations as f64,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(invalid("slope needs at least two paired points"));
    }
    if xs.iter().chain(ys).any(|&v| v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
        return Err(invalid("log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if var == 0.0 {
        return Err(invalid("x values are all equal"));
    }
    Ok(cov / var)
}
