//! Test-side reference implementations, written independently of the crate.
#![allow(dead_code)]

use hyperclust::{Assignment, Hypergraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// All `d`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

pub fn choose(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All balanced labelings of `n` nodes into `k` clusters, lexicographic order.
pub fn balanced_labelings(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, k: usize, left: &mut [usize], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..k {
            if left[c] > 0 {
                left[c] -= 1;
                cur.push(c as u32);
                rec(i + 1, n, k, left, cur, out);
                cur.pop();
                left[c] += 1;
            }
        }
    }
    let mut left = vec![n / k; k];
    let mut out = Vec::new();
    rec(0, n, k, &mut left, &mut Vec::new(), &mut out);
    out
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Largest number of agreeing nodes over all relabelings of `h`.
pub fn best_overlap(h: &[u32], t: &[u32], k: usize) -> usize {
    permutations(k)
        .iter()
        .map(|p| h.iter().zip(t).filter(|(a, b)| p[**a as usize] as u32 == **b).count())
        .max()
        .unwrap()
}

/// Canonical form of a partition: clusters renamed by first appearance.
pub fn canonical(labels: &[u32]) -> Vec<u32> {
    let mut map = Vec::<(u32, u32)>::new();
    labels
        .iter()
        .map(|l| match map.iter().find(|(a, _)| a == l) {
            Some(&(_, b)) => b,
            None => {
                let b = map.len() as u32;
                map.push((*l, b));
                b
            }
        })
        .collect()
}

pub fn random_hypergraph(rng: &mut impl Rng, n: usize, d: usize, density: f64) -> Hypergraph {
    let edges: Vec<Vec<usize>> = combinations(n, d).into_iter().filter(|_| rng.random::<f64>() < density).collect();
    Hypergraph::new(n, d, edges).unwrap()
}

pub fn random_labels(rng: &mut impl Rng, n: usize, k: usize) -> Vec<u32> {
    (0..n).map(|_| rng.random_range(0..k as u32)).collect()
}

pub fn random_balanced(rng: &mut impl Rng, n: usize, k: usize) -> Assignment {
    let mut labels: Vec<u32> = (0..n).map(|i| (i * k / n) as u32).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    Assignment::new_balanced(labels, k).unwrap()
}

/// Straight count: `(d-1)!` times the edges at `i` whose other members are all in `c`.
pub fn naive_score(g: &Hypergraph, labels: &[u32], k: usize) -> Vec<i64> {
    let mut out = vec![0i64; g.n() * k];
    let w = factorial(g.d() - 1);
    for i in 0..g.n() {
        for c in 0..k {
            let hits = g
                .edges()
                .filter(|e| e.contains(&(i as u32)))
                .filter(|e| e.iter().filter(|&&v| v as usize != i).all(|&v| labels[v as usize] == c as u32))
                .count();
            out[i * k + c] = w * hits as i64;
        }
    }
    out
}

pub fn monochromatic_edges(g: &Hypergraph, labels: &[u32]) -> usize {
    g.edges().filter(|e| e.iter().all(|&v| labels[v as usize] == labels[e[0] as usize])).count()
}

/// Hypergraph parameters small enough for the dense tensor.
pub fn small_instance() -> impl Strategy<Value = (Hypergraph, Vec<u32>, usize)> {
    (2usize..=4, prop_oneof![Just(2usize), Just(4usize)])
        .prop_flat_map(|(d, k)| (Just(d), Just(k), d.max(2)..=8usize))
        .prop_flat_map(|(d, k, n)| {
            let m = combinations(n, d).len();
            (
                Just((n, d, k)),
                proptest::collection::vec(any::<bool>(), m),
                proptest::collection::vec(0..k as u32, n),
            )
        })
        .prop_map(|((n, d, k), mask, labels)| {
            let edges: Vec<Vec<usize>> = combinations(n, d)
                .into_iter()
                .zip(mask)
                .filter_map(|(e, keep)| keep.then_some(e))
                .collect();
            (Hypergraph::new(n, d, edges).unwrap(), labels, k)
        })
}
