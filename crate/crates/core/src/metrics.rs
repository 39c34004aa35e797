//! Permutation-invariant comparison of two assignments.

use crate::assignment::Assignment;
use crate::error::{invalid, Result};

/// Exhaustive permutation search is used up to this many clusters.
pub const EXHAUSTIVE_MAX_K: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    /// `perm[c]` is the truth cluster matched to predicted cluster `c`.
    pub perm: Vec<usize>,
    /// Nodes whose predicted cluster maps onto their true cluster.
    pub overlap: usize,
    /// `min_Q ||H - H* Q||_F = sqrt(2 (n - overlap))`.
    pub distance: f64,
}

/// `m[c * k + t]` = number of nodes predicted `c` with truth `t`.
pub fn confusion(h: &Assignment, truth: &Assignment) -> Result<Vec<usize>> {
    if h.n() != truth.n() || h.k() != truth.k() {
        return Err(invalid(format!(
            "cannot compare {} nodes / {} clusters with {} nodes / {} clusters",
            h.n(),
            h.k(),
            truth.n(),
            truth.k()
        )));
    }
    let k = h.k();
    let mut m = vec![0usize; k * k];
    for (&a, &b) in h.labels().iter().zip(truth.labels()) {
        m[a as usize * k + b as usize] += 1;
    }
    Ok(m)
}

pub fn align_and_distance(h: &Assignment, truth: &Assignment) -> Result<Alignment> {
    let m = confusion(h, truth)?;
    let k = h.k();
    let (perm, overlap) = if k <= EXHAUSTIVE_MAX_K {
        best_permutation_exhaustive(&m, k)
    } else {
        best_permutation_hungarian(&m, k)
    };
    Ok(Alignment {
        perm,
        overlap,
        distance: (2.0 * (h.n() - overlap) as f64).sqrt(),
    })
}

pub fn misclassification_rate(h: &Assignment, truth: &Assignment) -> Result<f64> {
    let a = align_and_distance(h, truth)?;
    Ok((h.n() - a.overlap) as f64 / h.n().max(1) as f64)
}

/// True iff `h` equals `truth` up to renaming clusters.
pub fn exact_recovery(h: &Assignment, truth: &Assignment) -> Result<bool> {
    Ok(align_and_distance(h, truth)?.overlap == h.n())
}

/// Maximum-trace permutation by enumeration in lexicographic order; the first
/// maximizer wins, so the identity is preferred among ties.
pub fn best_permutation_exhaustive(m: &[usize], k: usize) -> (Vec<usize>, usize) {
    let mut perm: Vec<usize> = (0..k).collect();
    let score = |p: &[usize]| p.iter().enumerate().map(|(c, &t)| m[c * k + t]).sum::<usize>();
    let mut best = (perm.clone(), score(&perm));
    while next_permutation(&mut perm) {
        let s = score(&perm);
        if s > best.1 {
            best = (perm.clone(), s);
        }
    }
    best
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Maximum-trace permutation by the Hungarian method (shortest augmenting
/// paths with row and column potentials), `O(k^3)`.
pub fn best_permutation_hungarian(m: &[usize], k: usize) -> (Vec<usize>, usize) {
    let max = m.iter().copied().max().unwrap_or(0) as i64;
    let cost = |r: usize, c: usize| max - m[r * k + c] as i64;
    // 1-based internals; column 0 is the virtual start
    let mut u = vec![0i64; k + 1];
    let mut v = vec![0i64; k + 1];
    let mut row_of = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for r in 1..=k {
        row_of[0] = r;
        let mut c0 = 0;
        let mut minv = vec![i64::MAX; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[c0] = true;
            let r0 = row_of[c0];
            let mut delta = i64::MAX;
            let mut c1 = 0;
            for c in 1..=k {
                if !used[c] {
                    let cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
                    if cur < minv[c] {
                        minv[c] = cur;
                        way[c] = c0;
                    }
                    if minv[c] < delta {
                        delta = minv[c];
                        c1 = c;
                    }
                }
            }
            for c in 0..=k {
                if used[c] {
                    u[row_of[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            c0 = c1;
            if row_of[c0] == 0 {
                break;
            }
        }
        loop {
            let c1 = way[c0];
            row_of[c0] = row_of[c1];
            c0 = c1;
            if c0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; k];
    for c in 1..=k {
        perm[row_of[c] - 1] = c - 1;
    }
    let overlap = perm.iter().enumerate().map(|(r, &c)| m[r * k + c]).sum();
    (perm, overlap)
}
