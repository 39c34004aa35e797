//! Random instances of the symmetric d-uniform hypergraph stochastic block
//! model, and the padding that turns a non-uniform hypergraph into a uniform
//! one.
//!
//! Sampling draws the number of within-community edges `S ~ Bin(same, p)` and
//! cross edges `X ~ Bin(cross, q)`, then picks that many distinct subsets
//! uniformly from each pool. That is equivalent to one Bernoulli per subset
//! but touches only the edges that exist.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution};

use crate::assignment::{check_divisible, Assignment};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::seeds;

/// Raw model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// Within-community edge probability.
    pub p: f64,
    /// Cross-community edge probability.
    pub q: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(invalid(format!("order d must be >= 2, got {}", self.d)));
        }
        if self.k < 2 {
            return Err(invalid(format!("need at least 2 communities, got {}", self.k)));
        }
        check_divisible(self.n, self.k)?;
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::ParameterRegime(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(())
    }
}

/// Logarithmic degree regime: `p = alpha ln n / n^(d-1)`, `q = beta ln n / n^(d-1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogRegimeParams {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl LogRegimeParams {
    pub fn to_probabilities(&self) -> Result<ModelParams> {
        if !(self.alpha >= 0.0 && self.beta >= 0.0) {
            return Err(Error::ParameterRegime(format!(
                "alpha and beta must be nonnegative, got ({}, {})",
                self.alpha, self.beta
            )));
        }
        if self.n < 2 {
            return Err(invalid("log regime needs n >= 2"));
        }
        let n = self.n as f64;
        let scale = n.ln() / n.powi(self.d as i32 - 1);
        let (p, q) = (self.alpha * scale, self.beta * scale);
        if p > 1.0 || q > 1.0 {
            return Err(Error::ParameterRegime(format!(
                "alpha = {}, beta = {} give p = {p:.4}, q = {q:.4} at n = {}; probabilities must be <= 1",
                self.alpha, self.beta, self.n
            )));
        }
        let mp = ModelParams {
            n: self.n,
            d: self.d,
            k: self.k,
            p,
            q,
        };
        mp.validate()?;
        Ok(mp)
    }

    /// `(sqrt(alpha) - sqrt(beta))^2 / (K^(d-1) (d-1)!)`; exact recovery is
    /// information-theoretically possible iff this exceeds one.
    pub fn snr(&self) -> f64 {
        (self.alpha.sqrt() - self.beta.sqrt()).powi(2) / recovery_threshold(self.k, self.d)
    }
}

/// `K^(d-1) (d-1)!`.
pub fn recovery_threshold(k: usize, d: usize) -> f64 {
    (k as f64).powi(d as i32 - 1) * (1..d).map(|v| v as f64).product::<f64>()
}

/// Binomial coefficient, `None` on overflow.
pub fn binomial(n: u128, r: u128) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `(K C(m,d), C(n,d) - K C(m,d))`: the number of monochromatic and of mixed
/// d-subsets under a balanced partition.
pub fn pool_sizes(n: usize, d: usize, k: usize) -> Result<(u128, u128)> {
    check_divisible(n, k)?;
    let m = n / k;
    if d > m {
        return Err(Error::DegenerateModel(format!(
            "communities of size {m} cannot contain a {d}-edge"
        )));
    }
    let overflow = || invalid(format!("C({n}, {d}) overflows 128 bits"));
    let total = binomial(n as u128, d as u128).ok_or_else(overflow)?;
    let same = binomial(m as u128, d as u128)
        .and_then(|c| c.checked_mul(k as u128))
        .ok_or_else(overflow)?;
    Ok((same, total - same))
}

/// Inverse of the colexicographic rank of a `d`-subset of `0..n`.
pub(crate) fn unrank_combination(mut rank: u64, n: usize, d: usize, out: &mut Vec<u32>) {
    out.clear();
    let mut hi = n;
    for r in (1..=d).rev() {
        // largest c < hi with C(c, r) <= rank
        let (mut lo, mut up) = (r - 1, hi - 1);
        while lo < up {
            let mid = (lo + up).div_ceil(2);
            if binomial(mid as u128, r as u128).unwrap() as u64 <= rank {
                lo = mid;
            } else {
                up = mid - 1;
            }
        }
        rank -= binomial(lo as u128, r as u128).unwrap() as u64;
        out.push(lo as u32);
        hi = lo;
    }
    out.reverse();
}

/// Pools above this size are never enumerated.
const ENUMERATION_LIMIT: u64 = 20_000_000;

/// Draws one d-HSBM hypergraph. Identical inputs give identical edge sets.
pub fn sample(params: &ModelParams, truth: &Assignment, seed: u64) -> Result<Hypergraph> {
    params.validate()?;
    let ModelParams { n, d, k, p, q } = *params;
    if truth.n() != n || truth.k() != k || !truth.is_balanced() {
        return Err(invalid(format!(
            "ground truth must be a balanced assignment of {n} nodes into {k} clusters"
        )));
    }
    let (same, cross) = pool_sizes(n, d, k)?;
    let to_u64 = |v: u128| {
        u64::try_from(v).map_err(|_| invalid(format!("pool of {v} subsets is too large to sample")))
    };
    let (same, cross) = (to_u64(same)?, to_u64(cross)?);
    let mut rng = seeds::rng(seed);
    let draw = |count: u64, prob: f64, rng: &mut seeds::Rng| -> Result<u64> {
        if count == 0 || prob == 0.0 {
            return Ok(0);
        }
        Ok(Binomial::new(count, prob)
            .map_err(|e| invalid(format!("binomial({count}, {prob}): {e}")))?
            .sample(rng))
    };
    let s_count = draw(same, p, &mut rng)?;
    let x_count = draw(cross, q, &mut rng)?;

    let mut members: Vec<Vec<u32>> = vec![Vec::with_capacity(n / k); k];
    for (i, &l) in truth.labels().iter().enumerate() {
        members[l as usize].push(i as u32);
    }
    let labels = truth.labels();
    let per_cluster = same / k as u64;
    let m = n / k;

    let mut edges: Vec<u32> = Vec::with_capacity((s_count + x_count) as usize * d);
    let mut buf = Vec::with_capacity(d);
    for rank in index::sample(&mut rng, same as usize, s_count as usize) {
        let rank = rank as u64;
        let cluster = &members[(rank / per_cluster) as usize];
        unrank_combination(rank % per_cluster, m, d, &mut buf);
        let mut e: Vec<u32> = buf.iter().map(|&j| cluster[j as usize]).collect();
        e.sort_unstable();
        edges.extend_from_slice(&e);
    }

    let mono = |e: &[u32]| e.iter().all(|&v| labels[v as usize] == labels[e[0] as usize]);
    let total = same + cross;
    if x_count > 0 && 2 * x_count > cross && total <= ENUMERATION_LIMIT {
        // dense case: enumerate the cross pool and pick a uniform subset
        let mut pool: Vec<u32> = Vec::with_capacity(cross as usize * d);
        for rank in 0..total {
            unrank_combination(rank, n, d, &mut buf);
            if !mono(&buf) {
                pool.extend_from_slice(&buf);
            }
        }
        for idx in index::sample(&mut rng, cross as usize, x_count as usize) {
            edges.extend_from_slice(&pool[idx * d..(idx + 1) * d]);
        }
    } else {
        let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(x_count as usize);
        while (seen.len() as u64) < x_count {
            let mut e: Vec<u32> = index::sample(&mut rng, n, d).into_iter().map(|v| v as u32).collect();
            e.sort_unstable();
            if !mono(&e) && !seen.contains(&e) {
                edges.extend_from_slice(&e);
                seen.insert(e);
            }
        }
    }

    let mut rows: Vec<&[u32]> = edges.chunks_exact(d).collect();
    rows.sort_unstable();
    Ok(Hypergraph::from_canonical(n, d, rows.concat()))
}

/// A uniformly random balanced assignment.
pub fn random_balanced(n: usize, k: usize, seed: u64) -> Result<Assignment> {
    check_divisible(n, k)?;
    let mut labels: Vec<u32> = (0..n).map(|i| (i / (n / k)) as u32).collect();
    let mut rng = seeds::rng(seed);
    for i in (1..n).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    Assignment::new(labels, k)
}

/// Pads every edge smaller than `d0` with fixed dummy nodes so the result is
/// `d0`-uniform.
///
/// An edge of size `s < d0` receives the dummies for slots `s+1..=d0`; the
/// dummy for slot `j` (1-based, `3 <= j <= d0`) has 0-based id `n + j - 3`.
/// When padding happens the hypergraph has `n + d0 - 2` nodes and all dummy
/// ids are returned; a uniform input comes back unchanged with no dummies.
pub fn uniformize<E: AsRef<[usize]>>(edges: &[E], n: usize, d0: usize) -> Result<(Hypergraph, Vec<usize>)> {
    if d0 < 2 {
        return Err(invalid(format!("target order must be >= 2, got {d0}")));
    }
    if let Some(e) = edges.iter().find(|e| !(2..=d0).contains(&e.as_ref().len())) {
        return Err(invalid(format!(
            "edge {:?} has size {}, outside 2..={d0}",
            e.as_ref(),
            e.as_ref().len()
        )));
    }
    let padded = edges.iter().any(|e| e.as_ref().len() < d0);
    if !padded {
        return Ok((Hypergraph::new(n, d0, edges)?, Vec::new()));
    }
    let dummy = |slot: usize| n + slot - 3;
    let out: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| {
            let e = e.as_ref();
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(invalid(format!("node {v} out of range 0..{n}")));
            }
            let mut row = e.to_vec();
            row.extend((e.len() + 1..=d0).map(dummy));
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let g = Hypergraph::new(n + d0 - 2, d0, out)?;
    Ok((g, (3..=d0).map(dummy).collect()))
}
