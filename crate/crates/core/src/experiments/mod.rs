//! Reproducible experiment drivers.
//!
//! Every task derives its own seed from `(base seed, cell, trial)`, so results
//! do not depend on how work is scheduled, and rows are gathered back in task
//! order. Outputs are CSV with a header row; floats are written in shortest
//! round-trip form.

pub mod bench;
pub mod config;
pub mod converge;
pub mod phase;
pub mod uci;

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assignment::Assignment;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::init::{self, SpectralOptions};
use crate::metrics;
use crate::par::Execution;
use crate::sampler::{self, LogRegimeParams};
use crate::seeds::{self, Stream};
use crate::solver::{self, SolveOptions, SolveReport};

/// How the starting assignment is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitStrategy {
    Random,
    Spectral,
    /// Ground truth with this many disjoint label swaps.
    Corrupt(usize),
}

impl FromStr for InitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(Self::Random),
            "spectral" => Ok(Self::Spectral),
            other => match other.strip_prefix("corrupt:") {
                Some(n) => n
                    .parse()
                    .map(Self::Corrupt)
                    .map_err(|_| invalid(format!("bad swap count in {other:?}"))),
                None => Err(invalid(format!(
                    "unknown init {other:?}; expected random, spectral or corrupt:<swaps>"
                ))),
            },
        }
    }
}

impl fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Random => f.write_str("random"),
            Self::Spectral => f.write_str("spectral"),
            Self::Corrupt(s) => write!(f, "corrupt:{s}"),
        }
    }
}

impl InitStrategy {
    /// `truth` is required only for [`InitStrategy::Corrupt`].
    pub fn start(
        self,
        g: &Hypergraph,
        k: usize,
        truth: Option<&Assignment>,
        seed: u64,
        exec: Execution,
    ) -> Result<Assignment> {
        match self {
            Self::Random => init::random_init(g.n(), k, seed),
            Self::Spectral => {
                let mut opts = SpectralOptions::default();
                opts.kmeans.execution = exec;
                init::spectral_init(g, k, seed, opts)
            }
            Self::Corrupt(swaps) => {
                let truth = truth.ok_or_else(|| invalid("corrupt init needs a ground truth"))?;
                init::corrupt(truth, swaps, seed)
            }
        }
    }
}

/// Inclusive arithmetic range `start, start + step, .. <= stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    pub fn single(v: f64) -> Self {
        Self::new(v, v, 1.0)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step > 0.0) || self.start > self.stop {
            return Err(Error::Config(format!(
                "{name} range {}:{}:{} is empty or malformed",
                self.start, self.stop, self.step
            )));
        }
        Ok(())
    }

    /// Grid values; computed as `start + i * step` to avoid drift.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    /// `start:stop:step` or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("bad range {s:?}; expected start:stop:step")))?;
        match parts[..] {
            [v] => Ok(Self::single(v)),
            [a, b, c] => Ok(Self::new(a, b, c)),
            _ => Err(Error::Config(format!("bad range {s:?}; expected start:stop:step"))),
        }
    }
}

/// Cell status in the raw output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Derived probabilities exceed one.
    SkippedRegime,
}

/// One trial of a grid experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub alpha: f64,
    pub beta: f64,
    pub trial: usize,
    pub seed: u64,
    pub status: Status,
    pub success: bool,
    pub iterations_run: usize,
    pub misclassification: Option<f64>,
    /// Aligned Frobenius distance of the output to the planted partition.
    pub distance: Option<f64>,
    pub edges: usize,
    /// Initialization plus solve, sampling excluded.
    pub wall_ms: f64,
}

impl ResultRow {
    fn skipped(alpha: f64, beta: f64, trial: usize, seed: u64) -> Self {
        Self {
            alpha,
            beta,
            trial,
            seed,
            status: Status::SkippedRegime,
            success: false,
            iterations_run: 0,
            misclassification: None,
            distance: None,
            edges: 0,
            wall_ms: 0.0,
        }
    }
}

/// A sampled planted instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub params: LogRegimeParams,
    pub truth: Assignment,
    pub graph: Hypergraph,
}

impl Instance {
    /// The planted partition is a uniformly random balanced labeling, so
    /// index-order tie-breaking carries no information about it.
    pub fn sample(params: LogRegimeParams, seed: u64) -> Result<Self> {
        let mp = params.to_probabilities()?;
        let truth = sampler::random_balanced(params.n, params.k, seeds::derive(seed, Stream::Truth))?;
        let graph = sampler::sample(&mp, &truth, seeds::derive(seed, Stream::Graph))?;
        Ok(Self { params, truth, graph })
    }
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub report: SolveReport,
    pub alignment: metrics::Alignment,
    pub wall_ms: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveSettings {
    pub max_iters: Option<usize>,
    pub early_stop: bool,
    pub record_trajectory: bool,
}

impl SolveSettings {
    pub fn capped(max_iters: Option<usize>) -> Self {
        Self {
            max_iters,
            early_stop: true,
            record_trajectory: false,
        }
    }
}

/// Initializes and solves one instance, scoring against its planted truth.
pub fn solve_instance(
    inst: &Instance,
    init: InitStrategy,
    settings: SolveSettings,
    seed: u64,
    exec: Execution,
) -> Result<TrialOutcome> {
    let clock = Instant::now();
    let h0 = init.start(&inst.graph, inst.params.k, Some(&inst.truth), seed, exec)?;
    let opts = SolveOptions {
        early_stop: settings.early_stop,
        record_trajectory: settings.record_trajectory,
        truth: Some(&inst.truth),
        dummies: 0,
    };
    let report = solver::ptpm(&inst.graph, &h0, settings.max_iters, &opts)?;
    let wall_ms = clock.elapsed().as_secs_f64() * 1e3;
    let alignment = metrics::align_and_distance(&report.final_assignment, &inst.truth)?;
    Ok(TrialOutcome {
        report,
        alignment,
        wall_ms,
    })
}

/// Runs one grid trial end to end.
pub fn run_trial(
    params: LogRegimeParams,
    init: InitStrategy,
    max_iters: Option<usize>,
    trial: usize,
    seed: u64,
    exec: Execution,
) -> Result<ResultRow> {
    if params.to_probabilities().is_err() {
        return Ok(ResultRow::skipped(params.alpha, params.beta, trial, seed));
    }
    let inst = Instance::sample(params, seed)?;
    let out = solve_instance(
        &inst,
        init,
        SolveSettings::capped(max_iters),
        seeds::derive(seed, Stream::Init),
        exec,
    )?;
    let n = inst.truth.n();
    Ok(ResultRow {
        alpha: params.alpha,
        beta: params.beta,
        trial,
        seed,
        status: Status::Ok,
        success: out.alignment.overlap == n,
        iterations_run: out.report.iterations_run,
        misclassification: Some((n - out.alignment.overlap) as f64 / n as f64),
        distance: Some(out.alignment.distance),
        edges: inst.graph.num_edges(),
        wall_ms: out.wall_ms,
    })
}

pub fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// `path` with `suffix` inserted before the extension.
pub fn sibling_path(path: &Path, suffix: &str) -> std::path::PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}
