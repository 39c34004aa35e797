//! Success-ratio grids over `(alpha, beta)` in the logarithmic regime.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{run_trial, sibling_path, write_csv, InitStrategy, Range, ResultRow, Status};
use crate::par::{self, Execution};
use crate::sampler::{recovery_threshold, LogRegimeParams};
use crate::seeds;

#[derive(Clone, Debug, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub alpha: Range,
    pub beta: Range,
    pub trials: usize,
    pub init: InitStrategy,
    /// `None` uses the theoretical budget for `n`.
    pub max_iters: Option<usize>,
    pub seed: u64,
    pub execution: Execution,
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        self.alpha.validate("alpha")?;
        self.beta.validate("beta")?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.alpha.start < 0.0 || self.beta.start < 0.0 {
            return Err(Error::Config("alpha and beta must be nonnegative".into()));
        }
        if self.n == 0 || self.k < 2 || !self.n.is_multiple_of(self.k) || self.d < 2 {
            return Err(Error::Config(format!(
                "need d >= 2, k >= 2 and k | n; got n = {}, d = {}, k = {}",
                self.n, self.d, self.k
            )));
        }
        let top = LogRegimeParams {
            n: self.n,
            d: self.d,
            k: self.k,
            alpha: self.alpha.stop,
            beta: self.beta.stop,
        };
        if top.to_probabilities().is_err() {
            log::warn!(
                "alpha = {} or beta = {} exceeds probability one at n = {}; those cells are skipped",
                self.alpha.stop,
                self.beta.stop,
                self.n
            );
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(f64, f64)> {
        let betas = self.beta.values();
        self.alpha
            .values()
            .into_iter()
            .flat_map(|a| betas.iter().map(move |&b| (a, b)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub alpha: f64,
    pub beta: f64,
    pub trials: usize,
    pub successes: usize,
    /// `None` when the cell was skipped.
    pub ratio: Option<f64>,
    /// `(sqrt(alpha) - sqrt(beta))^2`.
    pub gap: f64,
}

#[derive(Clone, Debug)]
pub struct PhaseResult {
    pub rows: Vec<ResultRow>,
    pub cells: Vec<CellSummary>,
    /// `(beta, alpha)` on `(sqrt(alpha) - sqrt(beta))^2 = K^(d-1) (d-1)!`.
    pub threshold: Vec<(f64, f64)>,
}

pub fn phase_transition(cfg: &GridConfig) -> Result<PhaseResult> {
    cfg.validate()?;
    let cells = cfg.cells();
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let rows = par::map_indexed(cfg.execution, tasks.len(), |idx| {
        let (cell, trial) = tasks[idx];
        let (alpha, beta) = cells[cell];
        let params = LogRegimeParams {
            n: cfg.n,
            d: cfg.d,
            k: cfg.k,
            alpha,
            beta,
        };
        let seed = seeds::task_seed(cfg.seed, cell as u64, trial as u64);
        // trials already run in parallel; keep k-means restarts on this thread
        run_trial(params, cfg.init, cfg.max_iters, trial, seed, Execution::Sequential)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let summaries = cells
        .iter()
        .enumerate()
        .map(|(c, &(alpha, beta))| {
            let chunk = &rows[c * cfg.trials..(c + 1) * cfg.trials];
            let skipped = chunk.iter().any(|r| r.status == Status::SkippedRegime);
            let successes = chunk.iter().filter(|r| r.success).count();
            CellSummary {
                alpha,
                beta,
                trials: cfg.trials,
                successes,
                ratio: (!skipped).then(|| successes as f64 / cfg.trials as f64),
                gap: (alpha.sqrt() - beta.sqrt()).powi(2),
            }
        })
        .collect();
    let t = recovery_threshold(cfg.k, cfg.d);
    let threshold = cfg
        .beta
        .values()
        .into_iter()
        .map(|b| (b, (b.sqrt() + t.sqrt()).powi(2)))
        .collect();
    Ok(PhaseResult {
        rows,
        cells: summaries,
        threshold,
    })
}

impl PhaseResult {
    /// Writes raw rows to `path`, the alpha-by-beta ratio matrix to
    /// `<stem>_ratio.csv` and the threshold curve to `<stem>_threshold.csv`.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_csv(&self.rows, path)?;

        let mut betas: Vec<f64> = self.cells.iter().map(|c| c.beta).collect();
        betas.sort_by(f64::total_cmp);
        betas.dedup();
        let mut w = BufWriter::new(File::create(sibling_path(path, "_ratio"))?);
        write!(w, "alpha")?;
        for b in &betas {
            write!(w, ",beta={b}")?;
        }
        writeln!(w)?;
        for row in self.cells.chunks(betas.len()) {
            write!(w, "{}", row[0].alpha)?;
            for c in row {
                match c.ratio {
                    Some(r) => write!(w, ",{r}")?,
                    None => write!(w, ",")?,
                }
            }
            writeln!(w)?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(sibling_path(path, "_threshold"))?;
        w.write_record(["beta", "alpha_threshold"])?;
        for (b, a) in &self.threshold {
            w.write_record([b.to_string(), a.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
