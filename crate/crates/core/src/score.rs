//! The multilinear scoring operator and the likelihood objective.
//!
//! For a 0/1 symmetric tensor with zero diagonal, entry `(i, k)` of
//! `A[H^{(d-1)}]` sums `A[i, i2, .., id]` over ordered tuples whose members all
//! carry label `k`. Each hyperedge containing `i` whose other `d - 1` members
//! share label `k` contributes `(d - 1)!` ordered tuples, so the whole matrix
//! is computed in one pass over the edge list.

use crate::assignment::Assignment;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;

/// A dense row-major `n x k` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix<T = i64> {
    n: usize,
    k: usize,
    values: Vec<T>,
}

impl<T: Copy + Default> ScoreMatrix<T> {
    pub fn zeros(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            values: vec![T::default(); n * k],
        }
    }

    pub fn from_vec(n: usize, k: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != n * k {
            return Err(invalid(format!(
                "expected {} values for a {n} x {k} matrix, got {}",
                n * k,
                values.len()
            )));
        }
        Ok(Self { n, k, values })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let k = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != k) {
            return Err(invalid("ragged rows"));
        }
        let values = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_vec(rows.len(), k, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, c: usize) -> T {
        self.values[i * self.k + c]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.values.chunks_exact(self.k.max(1)).take(self.n)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub(crate) fn get_mut(&mut self, i: usize, c: usize) -> &mut T {
        &mut self.values[i * self.k + c]
    }

    /// Sum of the entries selected by `h`, i.e. `<H, C>`.
    pub fn selected_sum(&self, h: &Assignment) -> T
    where
        T: std::iter::Sum<T>,
    {
        (0..self.n).map(|i| self.get(i, h.label(i))).sum()
    }

    /// Permutes columns: column `c` of `self` becomes column `perm[c]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n, self.k);
        for i in 0..self.n {
            for (c, &to) in perm.iter().enumerate().take(self.k) {
                *out.get_mut(i, to) = self.get(i, c);
            }
        }
        out
    }
}

impl ScoreMatrix<i64> {
    pub fn to_f64(&self) -> ScoreMatrix<f64> {
        ScoreMatrix {
            n: self.n,
            k: self.k,
            values: self.values.iter().map(|&v| v as f64).collect(),
        }
    }
}

/// One-hot indicator matrix of an assignment.
pub fn indicator(h: &Assignment) -> ScoreMatrix<f64> {
    let mut m = ScoreMatrix::zeros(h.n(), h.k());
    for i in 0..h.n() {
        *m.get_mut(i, h.label(i)) = 1.0;
    }
    m
}

pub(crate) fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

fn check_lengths(g: &Hypergraph, h: &Assignment) -> Result<()> {
    if h.n() != g.n() {
        return Err(invalid(format!(
            "assignment has {} labels but the hypergraph has {} nodes",
            h.n(),
            g.n()
        )));
    }
    Ok(())
}

/// Computes `A[H^{(d-1)}]` by a single pass over the edges.
pub fn multilinear_score(g: &Hypergraph, h: &Assignment) -> Result<ScoreMatrix> {
    check_lengths(g, h)?;
    let d = g.d();
    let mut out = ScoreMatrix::zeros(g.n(), h.k());
    // (label, multiplicity) pairs of the current edge
    let mut counts: Vec<(u32, usize)> = Vec::with_capacity(d);
    for edge in g.edges() {
        counts.clear();
        for &v in edge {
            let l = h.labels()[v as usize];
            match counts.iter_mut().find(|(c, _)| *c == l) {
                Some((_, m)) => *m += 1,
                None => counts.push((l, 1)),
            }
        }
        match counts.as_slice() {
            [(l, _)] => {
                for &v in edge {
                    *out.get_mut(v as usize, *l as usize) += 1;
                }
            }
            [(a, ca), (b, cb)] if *ca == 1 || *cb == 1 => {
                // The odd member sees the other d - 1 all in one cluster; for
                // d = 2 both members are odd.
                for &v in edge {
                    let l = h.labels()[v as usize];
                    if l == *a && *ca == 1 {
                        *out.get_mut(v as usize, *b as usize) += 1;
                    } else if l == *b && *cb == 1 {
                        *out.get_mut(v as usize, *a as usize) += 1;
                    }
                }
            }
            _ => {}
        }
    }
    let scale = factorial(d - 1);
    if scale != 1 {
        out.values.iter_mut().for_each(|v| *v *= scale);
    }
    Ok(out)
}

/// `<A, H^{(d)}>`: `d!` times the number of monochromatic edges.
pub fn objective(g: &Hypergraph, h: &Assignment) -> Result<i64> {
    check_lengths(g, h)?;
    let labels = h.labels();
    let mono = g
        .edges()
        .filter(|e| e.iter().all(|&v| labels[v as usize] == labels[e[0] as usize]))
        .count() as i64;
    Ok(mono * factorial(g.d()))
}

/// Size limits for the dense oracle.
#[derive(Clone, Copy, Debug)]
pub struct DenseOracleLimits {
    pub max_nodes: usize,
    pub max_order: usize,
}

impl Default for DenseOracleLimits {
    fn default() -> Self {
        Self {
            max_nodes: 10,
            max_order: 4,
        }
    }
}

/// Materializes the dense `n^d` tensor and evaluates the multilinear form by
/// literal summation over all ordered index tuples.
pub fn dense_multilinear_oracle(
    g: &Hypergraph,
    h: &Assignment,
    limits: DenseOracleLimits,
) -> Result<ScoreMatrix> {
    check_lengths(g, h)?;
    let (n, d, k) = (g.n(), g.d(), h.k());
    if n > limits.max_nodes || d > limits.max_order {
        return Err(Error::OracleBound(format!(
            "dense tensor oracle limited to n <= {}, d <= {}; got n = {n}, d = {d}",
            limits.max_nodes, limits.max_order
        )));
    }
    let size = n.pow(d as u32);
    let flat = |idx: &[usize]| idx.iter().fold(0, |acc, &i| acc * n + i);
    let mut tensor = vec![0i64; size];
    let mut perm: Vec<usize> = Vec::with_capacity(d);
    for edge in g.edges() {
        let members: Vec<usize> = edge.iter().map(|&v| v as usize).collect();
        for_each_permutation(&members, &mut perm, &mut |p| tensor[flat(p)] = 1);
    }

    let one_hot = |i: usize, c: usize| i64::from(h.label(i) == c);
    let mut out = ScoreMatrix::zeros(n, k);
    let mut idx = vec![0usize; d];
    for (pos, &entry) in tensor.iter().enumerate() {
        let mut rest = pos;
        for slot in (0..d).rev() {
            idx[slot] = rest % n;
            rest /= n;
        }
        for c in 0..k {
            let prod: i64 = idx[1..].iter().map(|&j| one_hot(j, c)).product();
            *out.get_mut(idx[0], c) += entry * prod;
        }
    }
    Ok(out)
}

fn for_each_permutation(items: &[usize], buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if buf.len() == items.len() {
        f(buf);
        return;
    }
    for &x in items {
        if !buf.contains(&x) {
            buf.push(x);
            for_each_permutation(items, buf, f);
            buf.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(labels: &[u32], k: usize) -> Assignment {
        Assignment::new(labels.to_vec(), k).unwrap()
    }

    #[test]
    fn empty_graph_scores_zero() {
        let g = Hypergraph::empty(5, 3).unwrap();
        let c = multilinear_score(&g, &h(&[0, 1, 0, 1, 1], 2)).unwrap();
        assert!(c.values().iter().all(|&v| v == 0));
        assert_eq!(objective(&g, &h(&[0, 1, 0, 1, 1], 2)).unwrap(), 0);
    }

    #[test]
    fn single_triangle_example() {
        // 1-based: edge {1,2,3}, labels (2,1,1,1)
        let g = Hypergraph::new(4, 3, [[0, 1, 2]]).unwrap();
        let a = h(&[1, 0, 0, 0], 2);
        let c = multilinear_score(&g, &a).unwrap();
        let dense = dense_multilinear_oracle(&g, &a, Default::default()).unwrap();
        assert_eq!(c, dense);
        assert_eq!(c.get(0, 0), 2);
        assert_eq!(c.values().iter().filter(|&&v| v != 0).count(), 1);
    }

    #[test]
    fn pairwise_case_is_adjacency_times_indicator() {
        let edges = [[0, 1], [1, 2], [2, 3], [0, 3], [1, 3]];
        let g = Hypergraph::new(4, 2, edges).unwrap();
        let a = h(&[0, 0, 1, 1], 2);
        let c = multilinear_score(&g, &a).unwrap();
        let mut adj = [[0i64; 4]; 4];
        for [u, v] in edges {
            adj[u][v] = 1;
            adj[v][u] = 1;
        }
        for (i, row) in adj.iter().enumerate() {
            for k in 0..2 {
                let want: i64 = (0..4).map(|j| row[j] * i64::from(a.label(j) == k)).sum();
                assert_eq!(c.get(i, k), want);
            }
        }
    }

    #[test]
    fn monochromatic_edge_objective() {
        let g = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(objective(&g, &h(&[1, 1, 1], 2)).unwrap(), 6);
    }

    #[test]
    fn two_planted_triangles_objective() {
        let g = Hypergraph::new(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(objective(&g, &h(&[0, 0, 0, 1, 1, 1], 2)).unwrap(), 12);
        assert_eq!(objective(&g, &h(&[0, 0, 1, 0, 1, 1], 2)).unwrap(), 0);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = Hypergraph::empty(4, 3).unwrap();
        assert!(multilinear_score(&g, &h(&[0, 1], 2)).is_err());
        assert!(objective(&g, &h(&[0, 1], 2)).is_err());
    }

    #[test]
    fn oracle_refuses_large_inputs() {
        let g = Hypergraph::empty(11, 3).unwrap();
        let a = Assignment::new(vec![0; 11], 1).unwrap();
        assert!(matches!(
            dense_multilinear_oracle(&g, &a, Default::default()),
            Err(Error::OracleBound(_))
        ));
    }
}
