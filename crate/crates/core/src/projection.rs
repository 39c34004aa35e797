//! Euclidean projection onto the set of balanced assignments.
//!
//! Since every balanced one-hot matrix has the same Frobenius norm, the
//! nearest balanced `H` to `C` is a maximizer of `sum_i C[i, label(i)]` subject
//! to each cluster holding exactly `m = n / k` nodes. That is a transportation
//! problem with `n` unit sources and `k` sinks of capacity `m`.
//!
//! The solver inserts nodes one at a time and augments along a shortest path
//! in the `k`-vertex cluster graph, where the arc `x -> y` costs the cheapest
//! loss `C[j, x] - C[j, y]` over nodes `j` currently in `x`. Those minima are
//! kept in lazily cleaned heaps, so an insertion costs `O(k^3 + k^2 log n)`.
//!
//! Among optimal assignments the lexicographically smallest label sequence is
//! returned. Optimal solutions are exactly the balanced assignments that use
//! only *tight* (node, cluster) pairs with respect to an optimal dual, so a
//! second pass walks the nodes in order and moves each to its smallest tight
//! cluster whenever an exchange path through later nodes allows it.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use crate::assignment::{check_divisible, Assignment};
use crate::error::{invalid, Error, Result};
use crate::score::ScoreMatrix;

const UNASSIGNED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Loss(f64);

impl Eq for Loss {}

impl PartialOrd for Loss {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Loss {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

type LossHeap = BinaryHeap<Reverse<(Loss, u32)>>;

struct Projector<'a> {
    c: &'a ScoreMatrix<f64>,
    n: usize,
    k: usize,
    m: usize,
    labels: Vec<u32>,
    sizes: Vec<usize>,
    /// `heaps[x * k + y]`: nodes of cluster `x` keyed by the loss of moving to `y`.
    heaps: Vec<LossHeap>,
    eps: f64,
}

impl<'a> Projector<'a> {
    fn new(c: &'a ScoreMatrix<f64>) -> Self {
        let (n, k) = (c.n(), c.k());
        let scale = c.values().iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        Self {
            c,
            n,
            k,
            m: n / k,
            labels: vec![UNASSIGNED; n],
            sizes: vec![0; k],
            heaps: vec![BinaryHeap::new(); k * k],
            eps: 16.0 * k as f64 * f64::EPSILON * scale,
        }
    }

    fn loss(&self, j: usize, from: usize, to: usize) -> f64 {
        self.c.get(j, from) - self.c.get(j, to)
    }

    fn place(&mut self, j: usize, x: usize) {
        let prev = self.labels[j];
        if prev != UNASSIGNED {
            self.sizes[prev as usize] -= 1;
        }
        self.labels[j] = x as u32;
        self.sizes[x] += 1;
        for y in (0..self.k).filter(|&y| y != x) {
            let l = self.loss(j, x, y);
            self.heaps[x * self.k + y].push(Reverse((Loss(l), j as u32)));
        }
    }

    /// Cheapest node of `x` to push into `y`, discarding stale heap entries.
    fn cheapest(&mut self, x: usize, y: usize) -> Option<(f64, u32)> {
        let heap = &mut self.heaps[x * self.k + y];
        while let Some(&Reverse((Loss(l), j))) = heap.peek() {
            if self.labels[j as usize] == x as u32 {
                return Some((l, j));
            }
            heap.pop();
        }
        None
    }

    fn insert(&mut self, i: usize) {
        let k = self.k;
        let mut dist: Vec<f64> = (0..k).map(|x| -self.c.get(i, x)).collect();
        // pred[y] = (x, node moved from x into y); None means y is entered by i
        let mut pred: Vec<Option<(usize, u32)>> = vec![None; k];
        let mut arcs: Vec<Option<(f64, u32)>> = vec![None; k * k];
        for x in 0..k {
            for y in (0..k).filter(|&y| y != x) {
                arcs[x * k + y] = self.cheapest(x, y);
            }
        }
        for _ in 0..k {
            let mut changed = false;
            for x in 0..k {
                for y in (0..k).filter(|&y| y != x) {
                    if let Some((w, j)) = arcs[x * k + y] {
                        let cand = dist[x] + w;
                        if cand < dist[y] - self.eps {
                            dist[y] = cand;
                            pred[y] = Some((x, j));
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let target = (0..k)
            .filter(|&y| self.sizes[y] < self.m)
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)))
            .expect("a cluster with spare capacity exists while nodes remain");

        let mut moves = Vec::new();
        let mut y = target;
        while let Some((x, j)) = pred[y] {
            moves.push((j as usize, y));
            y = x;
            assert!(moves.len() <= k, "augmenting path revisits a cluster");
        }
        for (j, to) in moves {
            self.place(j, to);
        }
        self.place(i, y);
    }

    fn solve(mut self) -> Vec<u32> {
        for i in 0..self.n {
            self.insert(i);
        }
        self.lexicographic_pass();
        self.labels
    }

    /// Optimal cluster potentials: shortest distances in the cluster graph
    /// from a virtual root. Node `j` in `x` may move to `y` in some optimal
    /// assignment iff `C[j,x] - C[j,y] == pot[y] - pot[x]`.
    fn potentials(&self) -> Vec<f64> {
        let k = self.k;
        let mut w = vec![f64::INFINITY; k * k];
        for j in 0..self.n {
            let x = self.labels[j] as usize;
            for y in (0..k).filter(|&y| y != x) {
                let l = self.loss(j, x, y);
                if l < w[x * k + y] {
                    w[x * k + y] = l;
                }
            }
        }
        let mut pot = vec![0.0f64; k];
        for _ in 0..k {
            let mut changed = false;
            for x in 0..k {
                for y in (0..k).filter(|&y| y != x) {
                    let cand = pot[x] + w[x * k + y];
                    if cand < pot[y] {
                        pot[y] = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        pot
    }

    fn lexicographic_pass(&mut self) {
        let k = self.k;
        if k < 2 {
            return;
        }
        let pot = self.potentials();
        let tol = self.eps.max(f64::MIN_POSITIVE);
        let c = self.c;
        let tight =
            |j: usize, x: usize, y: usize| c.get(j, x) - c.get(j, y) <= pot[y] - pot[x] + tol;

        // movable[x * k + y]: later nodes currently in x that are tight to y
        let mut movable: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); k * k];
        for j in 0..self.n {
            let x = self.labels[j] as usize;
            for y in (0..k).filter(|&y| y != x && tight(j, x, y)) {
                movable[x * k + y].insert(j as u32);
            }
        }
        let unlink = |movable: &mut Vec<BTreeSet<u32>>, j: usize, x: usize| {
            for y in (0..k).filter(|&y| y != x) {
                movable[x * k + y].remove(&(j as u32));
            }
        };
        let link = |movable: &mut Vec<BTreeSet<u32>>, j: usize, x: usize| {
            for y in (0..k).filter(|&y| y != x && tight(j, x, y)) {
                movable[x * k + y].insert(j as u32);
            }
        };

        let mut prev = vec![usize::MAX; k];
        let mut queue = VecDeque::with_capacity(k);
        for i in 0..self.n {
            let cur = self.labels[i] as usize;
            unlink(&mut movable, i, cur);
            for want in (0..cur).filter(|&y| tight(i, cur, y)) {
                // BFS over clusters from `want` back to `cur`
                prev.iter_mut().for_each(|p| *p = usize::MAX);
                prev[want] = want;
                queue.clear();
                queue.push_back(want);
                while let Some(x) = queue.pop_front() {
                    if x == cur {
                        break;
                    }
                    for y in 0..k {
                        if prev[y] == usize::MAX && !movable[x * k + y].is_empty() {
                            prev[y] = x;
                            queue.push_back(y);
                        }
                    }
                }
                if prev[cur] == usize::MAX {
                    continue;
                }
                let mut hops = Vec::new();
                let mut y = cur;
                while y != want {
                    let x = prev[y];
                    let j = *movable[x * k + y].first().expect("arc has a witness");
                    hops.push((j as usize, x, y));
                    y = x;
                }
                for (j, from, to) in hops {
                    unlink(&mut movable, j, from);
                    self.labels[j] = to as u32;
                    link(&mut movable, j, to);
                }
                self.labels[i] = want as u32;
                break;
            }
        }
    }
}

fn check_input(c: &ScoreMatrix<f64>) -> Result<()> {
    check_divisible(c.n(), c.k())?;
    if let Some(pos) = c.values().iter().position(|v| !v.is_finite()) {
        return Err(invalid(format!(
            "non-finite score at row {}, column {}",
            pos / c.k(),
            pos % c.k()
        )));
    }
    Ok(())
}

/// Nearest balanced assignment to `c` in Frobenius norm, with the
/// lexicographically smallest label sequence among ties.
pub fn project_balanced(c: &ScoreMatrix<f64>) -> Result<Assignment> {
    check_input(c)?;
    let labels = Projector::new(c).solve();
    Ok(Assignment::from_parts_unchecked(labels, c.k()))
}

/// Row-wise argmax with ties to the lowest cluster id; no balance constraint.
pub fn row_argmax<T: Copy + Default + PartialOrd>(c: &ScoreMatrix<T>, i: usize) -> usize {
    let row = c.row(i);
    let mut best = 0;
    for (x, v) in row.iter().enumerate().skip(1) {
        if *v > row[best] {
            best = x;
        }
    }
    best
}

#[derive(Clone, Copy, Debug)]
pub struct BruteForceLimits {
    pub max_nodes: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        Self { max_nodes: 12 }
    }
}

/// Exhaustive search over balanced assignments in lexicographic order,
/// keeping the first one that attains the maximum.
pub fn brute_force_projection(c: &ScoreMatrix<f64>, limits: BruteForceLimits) -> Result<Assignment> {
    check_input(c)?;
    if c.n() > limits.max_nodes {
        return Err(Error::OracleBound(format!(
            "exhaustive projection limited to n <= {}, got n = {}",
            limits.max_nodes,
            c.n()
        )));
    }
    struct Search<'a> {
        c: &'a ScoreMatrix<f64>,
        m: usize,
        sizes: Vec<usize>,
        labels: Vec<u32>,
        best: Option<(f64, Vec<u32>)>,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, acc: f64) {
            if i == self.c.n() {
                if self.best.as_ref().is_none_or(|(b, _)| acc > *b) {
                    self.best = Some((acc, self.labels.clone()));
                }
                return;
            }
            for x in 0..self.c.k() {
                if self.sizes[x] < self.m {
                    self.sizes[x] += 1;
                    self.labels[i] = x as u32;
                    self.go(i + 1, acc + self.c.get(i, x));
                    self.sizes[x] -= 1;
                }
            }
        }
    }
    let mut s = Search {
        c,
        m: c.n() / c.k(),
        sizes: vec![0; c.k()],
        labels: vec![0; c.n()],
        best: None,
    };
    s.go(0, 0.0);
    let (_, labels) = s.best.expect("at least one balanced assignment exists");
    Ok(Assignment::from_parts_unchecked(labels, c.k()))
}
