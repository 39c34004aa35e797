//! Congressional voting records as a 3-uniform hypergraph.
//!
//! Input is the UCI `house-votes-84.data` layout: a party name followed by
//! sixteen `y` / `n` / `?` fields per line. For each chosen issue, every
//! triple of members who recorded the same `y` or the same `n` becomes a
//! hyperedge with probability `edge_prob`; triples drawn under several issues
//! are kept once. Missing votes never agree with anything.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::time::Instant;

use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::assignment::Assignment;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::init;
use crate::metrics;
use crate::par::{self, Execution};
use crate::sampler::{binomial, unrank_combination};
use crate::seeds::{self, Stream};
use crate::solver::{self, SolveOptions};

pub const ISSUES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stance {
    Yea,
    Nay,
    Missing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VoteRecord {
    /// 1-based source line.
    pub line: usize,
    pub party: String,
    pub votes: Vec<Stance>,
}

/// Parses the records; malformed lines are logged and skipped.
pub fn parse_votes<R: BufRead>(reader: R, path: &Path) -> Result<Vec<VoteRecord>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        let parsed = (|| {
            let (party, votes) = fields.split_first().ok_or("empty line")?;
            if party.is_empty() {
                return Err("missing party");
            }
            if votes.len() != ISSUES {
                return Err("expected 16 vote fields");
            }
            let votes = votes
                .iter()
                .map(|v| match *v {
                    "y" => Ok(Stance::Yea),
                    "n" => Ok(Stance::Nay),
                    "?" => Ok(Stance::Missing),
                    _ => Err("vote must be y, n or ?"),
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok((party.to_string(), votes))
        })();
        match parsed {
            Ok((party, votes)) => out.push(VoteRecord {
                line: idx + 1,
                party,
                votes,
            }),
            Err(why) => log::warn!("{}:{}: skipping row: {why}", path.display(), idx + 1),
        }
    }
    Ok(out)
}

pub fn read_votes(path: &Path) -> Result<Vec<VoteRecord>> {
    parse_votes(BufReader::new(File::open(path)?), path)
}

/// The first `per_party` members of each of the two parties, in file order.
/// Cluster ids follow the order in which the parties first appear.
pub fn select_balanced(records: &[VoteRecord], per_party: usize) -> Result<(Vec<VoteRecord>, Assignment)> {
    let mut parties: Vec<&str> = Vec::new();
    for r in records {
        if !parties.contains(&r.party.as_str()) {
            parties.push(&r.party);
        }
    }
    if parties.len() != 2 {
        return Err(invalid(format!("expected two parties, found {parties:?}")));
    }
    let mut taken = [0usize; 2];
    let mut chosen = Vec::new();
    let mut labels = Vec::new();
    for r in records {
        let c = parties.iter().position(|p| *p == r.party).unwrap();
        if taken[c] < per_party {
            taken[c] += 1;
            chosen.push(r.clone());
            labels.push(c as u32);
        }
    }
    if let Some(c) = (0..2).find(|&c| taken[c] < per_party) {
        return Err(invalid(format!(
            "party {:?} has {} usable members, need {per_party}",
            parties[c], taken[c]
        )));
    }
    Ok((chosen, Assignment::new_balanced(labels, 2)?))
}

fn check_columns(columns: &[usize]) -> Result<()> {
    if columns.is_empty() {
        return Err(invalid("no issues selected"));
    }
    if let Some(&c) = columns.iter().find(|&&c| c == 0 || c > ISSUES) {
        return Err(invalid(format!("issue index {c} outside 1..={ISSUES}")));
    }
    Ok(())
}

/// Members grouped by identical recorded stance, one group per (issue, stance).
fn agreement_groups(records: &[VoteRecord], columns: &[usize]) -> Vec<Vec<u32>> {
    let mut groups = Vec::new();
    for &col in columns {
        for stance in [Stance::Yea, Stance::Nay] {
            groups.push(
                records
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.votes[col - 1] == stance)
                    .map(|(i, _)| i as u32)
                    .collect(),
            );
        }
    }
    groups
}

/// Number of distinct triples that agree on at least one chosen issue.
pub fn candidate_triple_count(records: &[VoteRecord], columns: &[usize]) -> Result<usize> {
    check_columns(columns)?;
    let mut seen = BTreeSet::new();
    for group in agreement_groups(records, columns) {
        for (a, &x) in group.iter().enumerate() {
            for (b, &y) in group.iter().enumerate().skip(a + 1) {
                for &z in &group[b + 1..] {
                    seen.insert([x, y, z]);
                }
            }
        }
    }
    Ok(seen.len())
}

/// Samples the vote hypergraph over `records` (node `i` is `records[i]`).
pub fn build_hypergraph(records: &[VoteRecord], columns: &[usize], edge_prob: f64, seed: u64) -> Result<Hypergraph> {
    check_columns(columns)?;
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(invalid(format!("edge probability {edge_prob} outside [0, 1]")));
    }
    let mut edges: BTreeSet<[u32; 3]> = BTreeSet::new();
    if edge_prob > 0.0 {
        let skip = Geometric::new(edge_prob).map_err(|e| invalid(e.to_string()))?;
        let mut rng = seeds::rng(seed);
        let mut buf = Vec::with_capacity(3);
        for group in agreement_groups(records, columns) {
            let total = binomial(group.len() as u128, 3).unwrap() as u64;
            // geometric gaps between successive Bernoulli successes
            let mut pos = skip.sample(&mut rng);
            while pos < total {
                unrank_combination(pos, group.len(), 3, &mut buf);
                edges.insert([group[buf[0] as usize], group[buf[1] as usize], group[buf[2] as usize]]);
                pos = pos.saturating_add(skip.sample(&mut rng)).saturating_add(1);
            }
        }
    }
    let flat: Vec<u32> = edges.into_iter().flatten().collect();
    Ok(Hypergraph::from_canonical(records.len(), 3, flat))
}

#[derive(Clone, Debug)]
pub struct UciConfig {
    /// 1-based issue indices.
    pub columns: Vec<usize>,
    pub edge_prob: f64,
    pub per_party: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for UciConfig {
    fn default() -> Self {
        Self {
            columns: vec![4, 5, 12, 15],
            edge_prob: 0.05,
            per_party: 168,
            restarts: 10,
            max_iters: 20,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UciRow {
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub best_restart: usize,
    pub objective: i64,
    pub iterations_run: usize,
    pub misclassification: f64,
    pub success: bool,
    /// Set when the hypergraph has no edges and the solve is meaningless.
    pub degenerate: bool,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct UciOutcome {
    pub graph: Hypergraph,
    pub truth: Assignment,
    pub row: UciRow,
}

/// Builds the hypergraph, runs best-of-`restarts` random starts by objective
/// and scores the winner against party labels.
pub fn uci_votes_pipeline(records: &[VoteRecord], cfg: &UciConfig) -> Result<UciOutcome> {
    if cfg.restarts == 0 {
        return Err(Error::Config("restarts must be >= 1".into()));
    }
    let (members, truth) = select_balanced(records, cfg.per_party)?;
    let graph = build_hypergraph(&members, &cfg.columns, cfg.edge_prob, seeds::derive(cfg.seed, Stream::Graph))?;
    let degenerate = graph.is_empty();
    if degenerate {
        log::warn!("vote hypergraph has no edges; the solve carries no information");
    }
    let clock = Instant::now();
    let base = seeds::derive(cfg.seed, Stream::Restart);
    let runs = par::map_indexed(cfg.execution, cfg.restarts, |r| -> Result<_> {
        let h0 = init::random_init(graph.n(), 2, seeds::task_seed(base, 0, r as u64))?;
        let report = solver::ptpm(&graph, &h0, Some(cfg.max_iters), &SolveOptions::default())?;
        let obj = report.final_objective(&graph)?;
        Ok((obj, report))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (best_restart, (objective, report)) = runs
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1 .0 > best.1 .0 { cur } else { best })
        .expect("restarts >= 1");
    let wall_ms = clock.elapsed().as_secs_f64() * 1e3;
    let misclassification = metrics::misclassification_rate(&report.final_assignment, &truth)?;
    Ok(UciOutcome {
        row: UciRow {
            seed: cfg.seed,
            nodes: graph.n(),
            edges: graph.num_edges(),
            best_restart,
            objective,
            iterations_run: report.iterations_run,
            misclassification,
            success: misclassification == 0.0,
            degenerate,
            wall_ms,
        },
        graph,
        truth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
republican,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y
democrat,y,y,y,n,n,n,n,n,n,n,n,n,n,n,n,n
republican,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y,?
democrat,y,y,y,n,n,n,n,n,n,n,n,n,n,n,n,n
bogus line
republican,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y,y
democrat,y,y,y,n,n,n,n,n,n,n,n,n,n,n,n,x
democrat,y,y,y,n,n,n,n,n,n,n,n,n,n,n,n,n
";

    fn fixture() -> Vec<VoteRecord> {
        parse_votes(FIXTURE.as_bytes(), Path::new("fixture")).unwrap()
    }

    #[test]
    fn malformed_rows_are_skipped() {
        let recs = fixture();
        assert_eq!(recs.len(), 6);
        assert_eq!(recs[2].votes[15], Stance::Missing);
        assert_eq!(recs[5].line, 8);
    }

    #[test]
    fn all_agree_on_one_issue() {
        let recs = fixture();
        // everyone voted y on issue 1
        assert_eq!(candidate_triple_count(&recs, &[1]).unwrap(), 20);
        // issue 16: the '?' leaves two republican y's; three democrat n's form one triple
        assert_eq!(candidate_triple_count(&recs, &[16]).unwrap(), 1);
        assert!(candidate_triple_count(&recs, &[17]).is_err());
    }

    #[test]
    fn selection_is_balanced_and_in_file_order() {
        let recs = fixture();
        let (chosen, truth) = select_balanced(&recs, 2).unwrap();
        let lines: Vec<usize> = chosen.iter().map(|r| r.line).collect();
        assert_eq!(lines, vec![1, 2, 3, 4]);
        assert_eq!(truth.labels(), &[0, 1, 0, 1]);
        assert!(select_balanced(&recs, 4).is_err());
    }

    #[test]
    fn edge_probability_limits() {
        let recs = fixture();
        let none = build_hypergraph(&recs, &[1], 0.0, 1).unwrap();
        assert!(none.is_empty());
        let all = build_hypergraph(&recs, &[1, 4], 1.0, 1).unwrap();
        assert_eq!(all.num_edges(), 20);
    }

    #[test]
    fn zero_probability_pipeline_is_flagged() {
        let recs = fixture();
        let cfg = UciConfig {
            edge_prob: 0.0,
            per_party: 3,
            restarts: 2,
            ..Default::default()
        };
        let out = uci_votes_pipeline(&recs, &cfg).unwrap();
        assert!(out.row.degenerate);
        assert_eq!(out.row.edges, 0);
    }

    #[test]
    fn party_split_is_recovered_on_partisan_issues() {
        let recs = fixture();
        let cfg = UciConfig {
            columns: vec![4, 5, 6],
            edge_prob: 1.0,
            per_party: 3,
            restarts: 4,
            ..Default::default()
        };
        let out = uci_votes_pipeline(&recs, &cfg).unwrap();
        assert_eq!(out.row.misclassification, 0.0);
        assert!(out.row.success);
    }
}
