mod common;

use std::collections::BTreeSet;

use common::*;
use hyperclust::io::write_hypergraph_to;
use hyperclust::sampler::{
    pool_sizes, random_balanced, recovery_threshold, sample, uniformize, LogRegimeParams, ModelParams,
};
use hyperclust::Assignment;
use proptest::prelude::*;

/// Independent pool count: classify every subset by its labels.
fn counted_pools(truth: &Assignment, d: usize) -> (u64, u64) {
    let l = truth.labels();
    combinations(truth.n(), d).iter().fold((0, 0), |(s, x), e| {
        if e.iter().all(|&v| l[v] == l[e[0]]) {
            (s + 1, x)
        } else {
            (s, x + 1)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pool_sizes_match_enumeration(k in 1usize..=3, m in 2usize..=5, d in 2usize..=4) {
        prop_assume!(d <= m);
        let truth = Assignment::contiguous(k * m, k).unwrap();
        let (s, x) = pool_sizes(k * m, d, k).unwrap();
        prop_assert_eq!((s as u64, x as u64), counted_pools(&truth, d));
    }

    #[test]
    fn edges_are_distinct_sorted_and_in_range(
        k in 2usize..=3, m in 3usize..=8, d in 2usize..=4, p in 0.0f64..=1.0, q in 0.0f64..=1.0, seed in any::<u64>(),
    ) {
        prop_assume!(d <= m);
        let n = k * m;
        let truth = random_balanced(n, k, seed).unwrap();
        let g = sample(&ModelParams { n, d, k, p, q }, &truth, seed).unwrap();
        let mut seen = BTreeSet::new();
        for e in g.edges() {
            prop_assert_eq!(e.len(), d);
            prop_assert!(e.windows(2).all(|w| w[0] < w[1]));
            prop_assert!((e[d - 1] as usize) < n);
            prop_assert!(seen.insert(e.to_vec()));
        }
    }

    #[test]
    fn same_seed_same_edges(seed in any::<u64>(), p in 0.0f64..0.3, q in 0.0f64..0.3) {
        let params = ModelParams { n: 24, d: 3, k: 3, p, q };
        let truth = random_balanced(24, 3, seed).unwrap();
        prop_assert_eq!(sample(&params, &truth, seed).unwrap(), sample(&params, &truth, seed).unwrap());
    }

    #[test]
    fn padding_restores_original_edges(n in 3usize..20, d0 in 2usize..=5, seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let mut raw = BTreeSet::new();
        for _ in 0..10 {
            let size = r.random_range(2..=d0.min(n));
            let mut e: Vec<usize> = rand::seq::index::sample(&mut r, n, size).into_vec();
            e.sort();
            raw.insert(e);
        }
        let raw: Vec<Vec<usize>> = raw.into_iter().collect();
        let (g, dummies) = uniformize(&raw, n, d0).unwrap();
        let padded = raw.iter().any(|e| e.len() < d0);
        prop_assert_eq!(dummies.len(), if padded { d0 - 2 } else { 0 });
        prop_assert_eq!(g.n(), n + dummies.len());
        let mut back: Vec<Vec<usize>> = g
            .edges()
            .map(|e| e.iter().map(|&v| v as usize).filter(|v| *v < n).collect())
            .collect();
        back.sort();
        prop_assert_eq!(back, raw);
    }
}

#[test]
fn certain_within_impossible_across() {
    let truth = random_balanced(12, 3, 5).unwrap();
    let g = sample(&ModelParams { n: 12, d: 3, k: 3, p: 1.0, q: 0.0 }, &truth, 1).unwrap();
    assert_eq!(g.num_edges(), 3 * 4);
    assert!(g.edges().all(|e| e.iter().all(|&v| truth.label(v as usize) == truth.label(e[0] as usize))));
    let none = sample(&ModelParams { n: 12, d: 3, k: 3, p: 0.0, q: 0.0 }, &truth, 1).unwrap();
    assert!(none.is_empty());
    let full = sample(&ModelParams { n: 12, d: 3, k: 3, p: 1.0, q: 1.0 }, &truth, 1).unwrap();
    assert_eq!(full.num_edges() as u64, choose(12, 3));
}

#[test]
fn dense_cross_pool_uses_every_subset() {
    // q close to one forces the enumeration path
    let truth = random_balanced(30, 2, 8).unwrap();
    let g = sample(&ModelParams { n: 30, d: 3, k: 2, p: 0.0, q: 0.97 }, &truth, 3).unwrap();
    let (_, cross) = counted_pools(&truth, 3);
    let x = g.num_edges() as f64;
    let (mean, sd) = (0.97 * cross as f64, (cross as f64 * 0.97 * 0.03).sqrt());
    assert!((x - mean).abs() < 5.0 * sd, "{x} vs {mean}");
    assert!(g.edges().all(|e| !e.iter().all(|&v| truth.label(v as usize) == truth.label(e[0] as usize))));
}

#[test]
fn concentration_over_seeds_with_planted_signal() {
    let (n, k, d, p, q) = (90, 3, 3, 0.02, 0.004);
    let truth = Assignment::contiguous(n, k).unwrap();
    let (s, x) = counted_pools(&truth, d);
    let (s, x) = (s as f64, x as f64);
    let mean = s * p + x * q;
    let var = s * p * (1.0 - p) + x * q * (1.0 - q);
    let trials = 200;
    let mut total = 0.0;
    let mut within = 0.0;
    for seed in 0..trials {
        let g = sample(&ModelParams { n, d, k, p, q }, &truth, seed).unwrap();
        total += g.num_edges() as f64;
        within += g.edges().filter(|e| e.iter().all(|&v| truth.label(v as usize) == truth.label(e[0] as usize))).count() as f64;
    }
    let t = trials as f64;
    assert!((total / t - mean).abs() <= 4.0 * (var / t).sqrt());
    let within_sd = (s * p * (1.0 - p) / t).sqrt();
    assert!((within / t - s * p).abs() <= 4.0 * within_sd);
}

#[test]
fn edge_files_are_byte_identical_per_seed() {
    let params = LogRegimeParams { n: 120, d: 3, k: 2, alpha: 33.0, beta: 8.0 }.to_probabilities().unwrap();
    let truth = random_balanced(120, 2, 42).unwrap();
    let write = || {
        let mut buf = Vec::new();
        write_hypergraph_to(&sample(&params, &truth, 42).unwrap(), &mut buf).unwrap();
        buf
    };
    assert_eq!(write(), write());
    let mut other = Vec::new();
    write_hypergraph_to(&sample(&params, &truth, 43).unwrap(), &mut other).unwrap();
    assert_ne!(write(), other);
}

#[test]
fn log_regime_probabilities() {
    let lp = LogRegimeParams { n: 480, d: 3, k: 2, alpha: 33.0, beta: 8.0 };
    let mp = lp.to_probabilities().unwrap();
    let scale = 480f64.ln() / (480.0 * 480.0);
    assert!((mp.p - 33.0 * scale).abs() < 1e-15);
    assert!((mp.q - 8.0 * scale).abs() < 1e-15);
    let flat = LogRegimeParams { alpha: 9.0, beta: 9.0, ..lp }.to_probabilities().unwrap();
    assert_eq!(flat.p, flat.q);
    assert!(LogRegimeParams { n: 10, d: 3, k: 2, alpha: 1e3, beta: 0.0 }.to_probabilities().is_err());
    assert_eq!(recovery_threshold(3, 3), 18.0);
    assert_eq!(recovery_threshold(2, 3), 8.0);
}

#[test]
fn pool_sizes_examples() {
    assert_eq!(pool_sizes(6, 3, 2).unwrap(), (2, 18));
    assert_eq!(pool_sizes(4, 2, 2).unwrap(), (2, 4));
    let same = 3 * choose(70, 3) as u128;
    assert_eq!(pool_sizes(210, 3, 3).unwrap(), (same, choose(210, 3) as u128 - same));
    assert!(pool_sizes(6, 4, 2).is_err());
}

#[test]
fn padding_examples() {
    let (g, dummies) = uniformize(&[vec![0, 1]], 400, 3).unwrap();
    assert_eq!(dummies, vec![400]);
    assert_eq!(g.edges().next().unwrap(), &[0, 1, 400]);
    let (g, dummies) = uniformize(&[vec![0, 1], vec![2, 3, 4]], 5, 3).unwrap();
    assert_eq!(dummies, vec![5]);
    assert_eq!(g.edges().collect::<Vec<_>>(), vec![&[0u32, 1, 5][..], &[2, 3, 4]]);
    let (g, dummies) = uniformize(&[vec![0, 1, 2]], 5, 3).unwrap();
    assert!(dummies.is_empty());
    assert_eq!(g.n(), 5);
    assert!(uniformize(&[vec![0]], 5, 3).is_err());
}
