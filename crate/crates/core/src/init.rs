//! Starting points for the power iteration.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::assignment::{check_divisible, Assignment};
use crate::error::{invalid, Result};
use crate::hypergraph::Hypergraph;
use crate::linalg::{self, BlockPowerOptions, KMeansOptions};
use crate::projection::project_balanced;
use crate::score::{indicator, ScoreMatrix};
use crate::seeds;

/// Projection of an `n x k` standard Gaussian matrix.
pub fn random_init(n: usize, k: usize, seed: u64) -> Result<Assignment> {
    check_divisible(n, k)?;
    let mut rng = seeds::rng(seed);
    let g: Vec<f64> = (0..n * k).map(|_| rng.sample(StandardNormal)).collect();
    project_balanced(&ScoreMatrix::from_vec(n, k, g)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Eigensolver {
    /// Full symmetric eigendecomposition.
    #[default]
    Dense,
    /// Shifted orthogonal iteration; fails when the eigengap is too small to
    /// converge within the iteration cap.
    BlockPower(BlockPowerOptions),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SpectralOptions {
    pub eigensolver: Eigensolver,
    pub kmeans: KMeansOptions,
}

/// Spectral clustering of the co-membership matrix, balanced by projecting
/// the k-means indicator.
pub fn spectral_init(g: &Hypergraph, k: usize, seed: u64, opts: SpectralOptions) -> Result<Assignment> {
    check_divisible(g.n(), k)?;
    let w = linalg::similarity_matrix(g);
    let vecs = match opts.eigensolver {
        Eigensolver::Dense => linalg::top_eigenvectors_dense(&w, k),
        Eigensolver::BlockPower(bp) => {
            linalg::top_eigenvectors_block_power(&w, k, seeds::derive(seed, seeds::Stream::Init), bp)?
        }
    };
    let km = linalg::kmeans(&vecs, k, seed, opts.kmeans);
    let raw = Assignment::new(km.labels, k)?;
    project_balanced(&indicator(&raw))
}

/// Exchanges the labels of `swaps` disjoint node pairs drawn from distinct
/// clusters, so `||H0 - H*||_F = 2 sqrt(swaps)` before any relabeling.
pub fn corrupt(truth: &Assignment, swaps: usize, seed: u64) -> Result<Assignment> {
    if !truth.is_balanced() {
        return Err(invalid("corrupt needs a balanced ground truth"));
    }
    let (n, k) = (truth.n(), truth.k());
    if 2 * swaps > n || (swaps > 0 && k < 2) {
        return Err(invalid(format!("cannot perform {swaps} disjoint swaps on {n} nodes")));
    }
    let mut untouched: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..n {
        untouched[truth.label(i)].push(i);
    }
    // s more swaps are possible iff sum_c min(r_c, s) >= 2 s
    let feasible = |pools: &[Vec<usize>], s: usize| pools.iter().map(|p| p.len().min(s)).sum::<usize>() >= 2 * s;
    let mut labels = truth.labels().to_vec();
    let mut rng = seeds::rng(seed);
    for done in 0..swaps {
        let remaining = swaps - done - 1;
        loop {
            let total: usize = untouched.iter().map(Vec::len).sum();
            let (ca, ia) = locate(&untouched, rng.random_range(0..total));
            let (cb, ib) = locate(&untouched, rng.random_range(0..total));
            if ca == cb {
                continue;
            }
            let a = untouched[ca].swap_remove(ia);
            let b = untouched[cb].swap_remove(ib);
            if feasible(&untouched, remaining) {
                labels.swap(a, b);
                break;
            }
            untouched[ca].push(a);
            untouched[cb].push(b);
            let last = untouched[ca].len() - 1;
            untouched[ca].swap(ia, last);
            let last = untouched[cb].len() - 1;
            untouched[cb].swap(ib, last);
        }
    }
    Assignment::new_balanced(labels, k)
}

fn locate(pools: &[Vec<usize>], mut idx: usize) -> (usize, usize) {
    for (c, p) in pools.iter().enumerate() {
        if idx < p.len() {
            return (c, idx);
        }
        idx -= p.len();
    }
    unreachable!("index within total")
}
