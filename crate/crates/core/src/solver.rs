//! The projected tensor power method.
//!
//! Starting from `H1 = T(H0)`, each iteration sets
//! `H(t+1) = T(A[H(t)^(d-1)])` where `T` is the balanced projection. The map
//! is deterministic, so once an iterate repeats it stays put; by default the
//! loop stops there.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assignment::{check_divisible, Assignment};
use crate::error::{invalid, Result};
use crate::hypergraph::Hypergraph;
use crate::metrics;
use crate::projection::{project_balanced, row_argmax};
use crate::score::{indicator, multilinear_score, objective, ScoreMatrix};

/// `ceil(2 ln ln n) + ceil(2 ln n / ln ln n) + 2`.
pub fn theoretical_iteration_budget(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(invalid(format!("iteration budget needs n >= 3, got {n}")));
    }
    let ln = (n as f64).ln();
    let lnln = ln.ln();
    Ok((2.0 * lnln).ceil() as usize + (2.0 * ln / lnln).ceil() as usize + 2)
}

#[derive(Clone, Debug)]
pub struct SolveOptions<'a> {
    /// Stop as soon as an iteration returns its input.
    pub early_stop: bool,
    pub record_trajectory: bool,
    /// Planted partition of the real (non-dummy) nodes, for distance tracking.
    pub truth: Option<&'a Assignment>,
    /// Trailing dummy nodes (from [`crate::sampler::uniformize`]). They take
    /// part in scoring but not in the balance constraint; each is assigned to
    /// its row argmax.
    pub dummies: usize,
}

impl Default for SolveOptions<'_> {
    fn default() -> Self {
        Self {
            early_stop: true,
            record_trajectory: false,
            truth: None,
            dummies: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 0 for the projected start `H1`, `t` after the t-th power iteration.
    pub iteration: usize,
    pub objective: i64,
    pub distance: Option<f64>,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub final_assignment: Assignment,
    pub iterations_run: usize,
    pub trajectory: Vec<IterationRecord>,
    pub converged_by_fixed_point: bool,
}

impl SolveReport {
    pub fn final_objective(&self, g: &Hypergraph) -> Result<i64> {
        objective(g, &self.final_assignment)
    }
}

struct Step {
    k: usize,
    real: usize,
    dummies: usize,
}

impl Step {
    /// Balanced projection over real nodes, argmax over dummy rows.
    fn project(&self, c: &ScoreMatrix<f64>) -> Result<Assignment> {
        if self.dummies == 0 {
            return project_balanced(c);
        }
        let real_rows = ScoreMatrix::from_vec(self.real, self.k, c.values()[..self.real * self.k].to_vec())?;
        let mut labels = project_balanced(&real_rows)?.into_labels();
        labels.extend((self.real..self.real + self.dummies).map(|i| row_argmax(c, i) as u32));
        Assignment::new(labels, self.k)
    }
}

/// Runs at most `max_iters` projected power iterations from `h0`; `None`
/// uses [`theoretical_iteration_budget`] of the node count.
pub fn ptpm(
    g: &Hypergraph,
    h0: &Assignment,
    max_iters: Option<usize>,
    opts: &SolveOptions<'_>,
) -> Result<SolveReport> {
    let k = h0.k();
    if h0.n() != g.n() {
        return Err(invalid(format!(
            "start has {} labels but the hypergraph has {} nodes",
            h0.n(),
            g.n()
        )));
    }
    if opts.dummies >= g.n() {
        return Err(invalid("dummy count must leave at least one real node"));
    }
    let real = g.n() - opts.dummies;
    check_divisible(real, k)?;
    if let Some(t) = opts.truth {
        if t.n() != real || t.k() != k {
            return Err(invalid(format!(
                "truth must label the {real} real nodes into {k} clusters"
            )));
        }
    }
    let max_iters = match max_iters {
        Some(m) => m,
        None => theoretical_iteration_budget(real.max(3))?,
    };
    let step = Step {
        k,
        real,
        dummies: opts.dummies,
    };

    let clock = Instant::now();
    let mut trajectory = Vec::new();
    let record = |traj: &mut Vec<IterationRecord>, t: usize, h: &Assignment| -> Result<()> {
        if opts.record_trajectory {
            let distance = match opts.truth {
                Some(truth) => Some(metrics::align_and_distance(&h.truncate(real), truth)?.distance),
                None => None,
            };
            traj.push(IterationRecord {
                iteration: t,
                objective: objective(g, h)?,
                distance,
                elapsed_secs: clock.elapsed().as_secs_f64(),
            });
        }
        Ok(())
    };

    let mut current = if h0.is_balanced() && opts.dummies == 0 {
        h0.clone()
    } else {
        step.project(&indicator(h0))?
    };
    record(&mut trajectory, 0, &current)?;

    let mut iterations_run = 0;
    let mut fixed = false;
    for t in 1..=max_iters {
        let scores = multilinear_score(g, &current)?;
        let next = step.project(&scores.to_f64())?;
        iterations_run = t;
        let same = next == current;
        current = next;
        record(&mut trajectory, t, &current)?;
        if same {
            fixed = true;
            if opts.early_stop {
                break;
            }
        }
    }
    Ok(SolveReport {
        final_assignment: current,
        iterations_run,
        trajectory,
        converged_by_fixed_point: fixed,
    })
}
