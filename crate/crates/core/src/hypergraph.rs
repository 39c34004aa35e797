//! Sparse symmetric d-uniform hypergraphs.
//!
//! The adjacency tensor is never materialized. A hypergraph is the canonical
//! set of its hyperedges: each edge is a strictly increasing tuple of `d`
//! distinct 0-based node ids, and the edge list is sorted and duplicate-free.
//! The tensor entry at `(i1, .., id)` is one exactly when `{i1, .., id}` is an
//! edge, so every permutation of an edge is implied and the diagonal is zero.

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    d: usize,
    /// Row-major `num_edges x d` node ids, rows sorted lexicographically.
    nodes: Vec<u32>,
}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary-order edges.
    ///
    /// Members within an edge may come in any order; they are sorted. Repeated
    /// members, out-of-range ids, wrong arity or duplicate edges are rejected.
    pub fn new<I, E>(n: usize, d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if d < 2 {
            return Err(invalid(format!("hyperedge order must be >= 2, got {d}")));
        }
        if n == 0 {
            return Err(invalid("node count must be positive"));
        }
        if n > u32::MAX as usize {
            return Err(invalid(format!("node count {n} exceeds u32 range")));
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (idx, e) in edges.into_iter().enumerate() {
            let e = e.as_ref();
            if e.len() != d {
                return Err(invalid(format!(
                    "edge #{idx} has {} members, expected {d}",
                    e.len()
                )));
            }
            let mut row: Vec<u32> = Vec::with_capacity(d);
            for &v in e {
                if v >= n {
                    return Err(invalid(format!("edge #{idx}: node {v} out of range 0..{n}")));
                }
                row.push(v as u32);
            }
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("edge #{idx} repeats a node: {e:?}")));
            }
            rows.push(row);
        }
        rows.sort_unstable();
        if let Some(w) = rows.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self {
            n,
            d,
            nodes: rows.concat(),
        })
    }

    /// Builds from edges that are already canonical (each sorted, list sorted,
    /// no duplicates). Only checked in debug builds.
    pub(crate) fn from_canonical(n: usize, d: usize, nodes: Vec<u32>) -> Self {
        debug_assert_eq!(nodes.len() % d, 0);
        debug_assert!(nodes.chunks_exact(d).all(|e| e.windows(2).all(|w| w[0] < w[1])));
        debug_assert!(nodes
            .chunks_exact(d)
            .zip(nodes.chunks_exact(d).skip(1))
            .all(|(a, b)| a < b));
        debug_assert!(nodes.iter().all(|&v| (v as usize) < n));
        Self { n, d, nodes }
    }

    pub fn empty(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, std::iter::empty::<Vec<usize>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_edges(&self) -> usize {
        self.nodes.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.nodes.chunks_exact(self.d)
    }

    pub fn contains(&self, edge: &[u32]) -> bool {
        if edge.len() != self.d {
            return false;
        }
        let mut key = edge.to_vec();
        key.sort_unstable();
        let (mut lo, mut hi) = (0, self.num_edges());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let row = &self.nodes[mid * self.d..(mid + 1) * self.d];
            match row.cmp(&key[..]) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Number of edges containing each node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &v in &self.nodes {
            deg[v as usize] += 1;
        }
        deg
    }
}
