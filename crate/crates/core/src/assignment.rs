use crate::error::{invalid, Result};

/// A labeling of `n` nodes into `k` clusters, 0-based.
///
/// Equivalent to a row one-hot `n x k` matrix. When every cluster holds
/// exactly `n / k` nodes the assignment is *balanced*, i.e. it belongs to the
/// feasible set of the likelihood problem. The flag is computed on
/// construction and always reflects the labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    labels: Vec<u32>,
    k: usize,
    balanced: bool,
}

impl Assignment {
    pub fn new(labels: Vec<u32>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("cluster count must be positive"));
        }
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l as usize >= k) {
            return Err(invalid(format!("node {i} has label {l}, outside 0..{k}")));
        }
        let balanced = is_balanced(&labels, k);
        Ok(Self {
            labels,
            k,
            balanced,
        })
    }

    /// Like [`Assignment::new`] but additionally requires balance.
    pub fn new_balanced(labels: Vec<u32>, k: usize) -> Result<Self> {
        let a = Self::new(labels, k)?;
        if !a.balanced {
            return Err(invalid(format!(
                "assignment of {} nodes into {k} clusters is not balanced (sizes {:?})",
                a.n(),
                a.cluster_sizes()
            )));
        }
        Ok(a)
    }

    /// Nodes `0..m` in cluster 0, `m..2m` in cluster 1, and so on.
    pub fn contiguous(n: usize, k: usize) -> Result<Self> {
        check_divisible(n, k)?;
        let m = n / k;
        Self::new((0..n).map(|i| (i / m) as u32).collect(), k)
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<u32>, k: usize) -> Self {
        debug_assert!(labels.iter().all(|&l| (l as usize) < k));
        let balanced = is_balanced(&labels, k);
        Self {
            labels,
            k,
            balanced,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i] as usize
    }

    pub fn is_balanced(&self) -> bool {
        self.balanced
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Renames cluster `c` to `perm[c]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if !is_permutation(perm, self.k) {
            return Err(invalid(format!("{perm:?} is not a permutation of 0..{}", self.k)));
        }
        Ok(Self {
            labels: self.labels.iter().map(|&l| perm[l as usize] as u32).collect(),
            k: self.k,
            balanced: self.balanced,
        })
    }

    /// Restriction to the first `n` nodes.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_parts_unchecked(self.labels[..n.min(self.n())].to_vec(), self.k)
    }

    pub fn into_labels(self) -> Vec<u32> {
        self.labels
    }
}

pub(crate) fn check_divisible(n: usize, k: usize) -> Result<()> {
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(invalid(format!(
            "balanced clusters need k | n, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

fn is_balanced(labels: &[u32], k: usize) -> bool {
    if labels.is_empty() || !labels.len().is_multiple_of(k) {
        return false;
    }
    let m = labels.len() / k;
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l as usize] += 1;
    }
    sizes.iter().all(|&s| s == m)
}

pub(crate) fn is_permutation(perm: &[usize], k: usize) -> bool {
    let mut seen = vec![false; k];
    perm.len() == k
        && perm.iter().all(|&p| p < k && !std::mem::replace(&mut seen[p], true))
}
