//! Distance-to-truth traces from several random starts on one instance.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::experiments::{solve_instance, InitStrategy, Instance, SolveSettings};
use crate::par::{self, Execution};
use crate::sampler::LogRegimeParams;
use crate::seeds::{self, Stream};

#[derive(Clone, Debug)]
pub struct ConvergenceConfig {
    pub params: LogRegimeParams,
    pub restarts: usize,
    pub max_iters: usize,
    pub early_stop: bool,
    pub seed: u64,
    pub execution: Execution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub restart: usize,
    pub iteration: usize,
    pub distance: f64,
    pub objective: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub seed: u64,
    pub final_distance: f64,
    /// First iteration whose iterate is at distance zero.
    pub hit_zero_at: Option<usize>,
    pub iterations_run: usize,
}

#[derive(Clone, Debug)]
pub struct ConvergenceResult {
    pub edges: usize,
    pub rows: Vec<TraceRow>,
    pub restarts: Vec<RestartSummary>,
}

pub fn convergence_trace(cfg: &ConvergenceConfig) -> Result<ConvergenceResult> {
    let inst = Instance::sample(cfg.params, cfg.seed)?;
    let restart_base = seeds::derive(cfg.seed, Stream::Restart);
    let settings = SolveSettings {
        max_iters: Some(cfg.max_iters),
        early_stop: cfg.early_stop,
        record_trajectory: true,
    };
    let runs = par::map_indexed(cfg.execution, cfg.restarts, |r| {
        let seed = seeds::task_seed(restart_base, 0, r as u64);
        solve_instance(&inst, InitStrategy::Random, settings, seed, Execution::Sequential)
    });
    let mut rows = Vec::new();
    let mut restarts = Vec::new();
    for (r, out) in runs.into_iter().enumerate() {
        let out = out?;
        let traj = &out.report.trajectory;
        for rec in traj {
            rows.push(TraceRow {
                restart: r,
                iteration: rec.iteration,
                distance: rec.distance.expect("truth supplied"),
                objective: rec.objective,
            });
        }
        restarts.push(RestartSummary {
            restart: r,
            seed: seeds::task_seed(restart_base, 0, r as u64),
            final_distance: out.alignment.distance,
            hit_zero_at: traj.iter().find(|t| t.distance == Some(0.0)).map(|t| t.iteration),
            iterations_run: out.report.iterations_run,
        });
    }
    Ok(ConvergenceResult {
        edges: inst.graph.num_edges(),
        rows,
        restarts,
    })
}
