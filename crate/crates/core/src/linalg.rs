//! Dense linear algebra for the spectral initializer: the pairwise
//! co-membership matrix, top eigenvectors, and seeded k-means.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::par::{self, Execution};
use crate::seeds;

/// `W[i][j]` = number of hyperedges containing both `i` and `j`, zero diagonal.
pub fn similarity_matrix(g: &Hypergraph) -> DMatrix<f64> {
    let n = g.n();
    let mut w = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        for (pos, &a) in e.iter().enumerate() {
            for &b in &e[pos + 1..] {
                w[(a as usize, b as usize)] += 1.0;
                w[(b as usize, a as usize)] += 1.0;
            }
        }
    }
    w
}

/// Eigenvectors of the `k` algebraically largest eigenvalues, as columns.
pub fn top_eigenvectors_dense(w: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(w.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let cols: Vec<_> = order.iter().take(k).map(|&c| eig.eigenvectors.column(c).into_owned()).collect();
    DMatrix::from_columns(&cols)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockPowerOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for BlockPowerOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 1000,
        }
    }
}

/// Orthogonal iteration on `W + s I` with `s` the largest absolute row sum,
/// which makes the shifted matrix positive semidefinite so the dominant
/// subspace is the top-`k` algebraic one.
///
/// Converged when `||W Q - Q (Q^T W Q)||_F <= tolerance * max(1, s)`.
pub fn top_eigenvectors_block_power(
    w: &DMatrix<f64>,
    k: usize,
    seed: u64,
    opts: BlockPowerOptions,
) -> Result<DMatrix<f64>> {
    let n = w.nrows();
    let shift = w
        .row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let scale = shift.max(1.0);
    let mut rng = seeds::rng(seed);
    let start = DMatrix::<f64>::from_fn(n, k, |_, _| rng.sample(StandardNormal));
    let mut q = start.qr().q();
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        let wq = w * &q;
        let rayleigh = q.transpose() * &wq;
        residual = (&wq - &q * rayleigh).norm();
        if residual <= opts.tolerance * scale {
            // Rayleigh-Ritz rotation so columns are ordered eigenvectors
            let small = SymmetricEigen::new(q.transpose() * &wq);
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &b| small.eigenvalues[b].total_cmp(&small.eigenvalues[a]));
            let rot = DMatrix::from_columns(
                &order.iter().map(|&c| small.eigenvectors.column(c).into_owned()).collect::<Vec<_>>(),
            );
            return Ok(q * rot);
        }
        q = (wq + &q * shift).qr().q();
    }
    Err(Error::EigenNonConvergence {
        iterations: opts.max_iterations,
        residual: residual / scale,
        tolerance: opts.tolerance,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub execution: Execution,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 100,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<u32>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm with k-means++ seeding; best of `restarts` by inertia.
/// `points` are the rows of the matrix.
pub fn kmeans(points: &DMatrix<f64>, k: usize, seed: u64, opts: KMeansOptions) -> KMeansResult {
    let rows: Vec<Vec<f64>> = points.row_iter().map(|r| r.iter().copied().collect()).collect();
    let runs = par::map_indexed(opts.execution, opts.restarts.max(1), |r| {
        lloyd(&rows, k, seeds::task_seed(seed, 0, r as u64), opts.max_iterations)
    });
    runs.into_iter()
        .reduce(|best, run| if run.inertia < best.inertia { run } else { best })
        .expect("at least one restart")
}

fn lloyd(rows: &[Vec<f64>], k: usize, seed: u64, max_iterations: usize) -> KMeansResult {
    let n = rows.len();
    let dim = rows.first().map_or(0, Vec::len);
    let mut rng = seeds::rng(seed);

    // k-means++ seeding
    let mut centers: Vec<Vec<f64>> = vec![rows[rng.random_range(0..n)].clone()];
    let mut nearest: Vec<f64> = rows.iter().map(|r| sq_dist(r, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in nearest.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.push(rows[pick].clone());
        for (i, r) in rows.iter().enumerate() {
            nearest[i] = nearest[i].min(sq_dist(r, &centers[centers.len() - 1]));
        }
    }

    let mut labels = vec![0u32; n];
    for iter in 0..max_iterations {
        let mut changed = false;
        for (i, r) in rows.iter().enumerate() {
            let best = (0..k)
                .min_by(|&a, &b| sq_dist(r, &centers[a]).total_cmp(&sq_dist(r, &centers[b])))
                .unwrap() as u32;
            if best != labels[i] || iter == 0 {
                changed |= best != labels[i];
                labels[i] = best;
            }
        }
        if iter > 0 && !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (r, &l) in rows.iter().zip(&labels) {
            counts[l as usize] += 1;
            sums[l as usize].iter_mut().zip(r).for_each(|(s, v)| *s += v);
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
            // an empty cluster keeps its previous center
        }
    }
    let inertia = rows
        .iter()
        .zip(&labels)
        .map(|(r, &l)| sq_dist(r, &centers[l as usize]))
        .sum();
    KMeansResult { labels, inertia }
}
