use std::collections::BTreeSet;

use hyperclust::experiments::bench::{loglog_slope, timing_benchmark, TimingConfig, TimingRow};
use hyperclust::experiments::config::KeyValues;
use hyperclust::experiments::converge::{convergence_trace, ConvergenceConfig};
use hyperclust::experiments::phase::{phase_transition, GridConfig};
use hyperclust::experiments::{read_csv, write_csv, InitStrategy, Range, ResultRow, Status};
use hyperclust::sampler::LogRegimeParams;
use hyperclust::Execution;

fn grid(exec: Execution) -> GridConfig {
    GridConfig {
        n: 30,
        d: 3,
        k: 2,
        alpha: Range::new(0.0, 30.0, 10.0),
        beta: Range::new(0.0, 10.0, 5.0),
        trials: 3,
        init: InitStrategy::Random,
        max_iters: Some(15),
        seed: 11,
        execution: exec,
    }
}

fn without_wall_time(rows: &[ResultRow]) -> Vec<ResultRow> {
    rows.iter().map(|r| ResultRow { wall_ms: 0.0, ..r.clone() }).collect()
}

#[test]
fn every_grid_cell_and_trial_appears_once() {
    let res = phase_transition(&grid(Execution::Parallel)).unwrap();
    assert_eq!(res.rows.len(), 4 * 3 * 3);
    let keys: BTreeSet<(u64, u64, usize)> =
        res.rows.iter().map(|r| (r.alpha.to_bits(), r.beta.to_bits(), r.trial)).collect();
    assert_eq!(keys.len(), res.rows.len());
    assert_eq!(res.cells.len(), 12);
    for r in &res.rows {
        assert_eq!(r.success, r.misclassification == Some(0.0));
        assert_eq!(r.success, r.distance == Some(0.0));
    }
}

#[test]
fn results_do_not_depend_on_scheduling() {
    let a = phase_transition(&grid(Execution::Sequential)).unwrap();
    let b = phase_transition(&grid(Execution::Parallel)).unwrap();
    assert_eq!(without_wall_time(&a.rows), without_wall_time(&b.rows));
}

#[test]
fn csv_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str| {
        let res = phase_transition(&grid(Execution::Parallel)).unwrap();
        let path = dir.path().join(name);
        write_csv(&without_wall_time(&res.rows), &path).unwrap();
        res.write(&dir.path().join(format!("full_{name}"))).unwrap();
        std::fs::read(path).unwrap()
    };
    assert_eq!(write("a.csv"), write("b.csv"));
    let ratio = std::fs::read_to_string(dir.path().join("full_a_ratio.csv")).unwrap();
    assert!(ratio.starts_with("alpha,beta=0,beta=5,beta=10\n"));
    assert!(dir.path().join("full_a_threshold.csv").exists());
    let back: Vec<ResultRow> = read_csv(&dir.path().join("full_a.csv")).unwrap();
    assert_eq!(back.len(), 36);
}

#[test]
fn cells_beyond_probability_one_are_flagged() {
    let cfg = GridConfig {
        n: 12,
        alpha: Range::new(10.0, 200.0, 190.0),
        beta: Range::single(0.0),
        trials: 2,
        ..grid(Execution::Sequential)
    };
    let res = phase_transition(&cfg).unwrap();
    let skipped: Vec<_> = res.rows.iter().filter(|r| r.status == Status::SkippedRegime).collect();
    assert_eq!(skipped.len(), 2);
    assert!(skipped.iter().all(|r| r.alpha == 200.0 && !r.success && r.misclassification.is_none()));
    assert_eq!(res.cells[1].ratio, None);
}

#[test]
fn convergence_restarts_are_reproducible() {
    let cfg = ConvergenceConfig {
        params: LogRegimeParams { n: 60, d: 3, k: 2, alpha: 33.0, beta: 8.0 },
        restarts: 3,
        max_iters: 10,
        early_stop: true,
        seed: 2,
        execution: Execution::Parallel,
    };
    let a = convergence_trace(&cfg).unwrap();
    let b = convergence_trace(&ConvergenceConfig { execution: Execution::Sequential, ..cfg }).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.restarts, b.restarts);
    for r in &a.restarts {
        let trace: Vec<_> = a.rows.iter().filter(|t| t.restart == r.restart).collect();
        assert_eq!(trace.len(), r.iterations_run + 1);
        assert!(trace.iter().all(|t| t.distance >= 0.0));
        assert_eq!(trace.last().unwrap().distance, r.final_distance);
    }
}

#[test]
fn timing_rows_round_trip_and_repeat() {
    let cfg = TimingConfig {
        params: vec![LogRegimeParams { n: 30, d: 3, k: 2, alpha: 20.0, beta: 2.0 }],
        timed_iterations: 3,
        repetitions: 2,
        seed: 5,
    };
    let a = timing_benchmark(&cfg).unwrap();
    let b = timing_benchmark(&cfg).unwrap();
    assert_eq!(a[0].iterations_to_fixed_point, b[0].iterations_to_fixed_point);
    assert_eq!(a[0].edges, b[0].edges);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    write_csv(&a, &path).unwrap();
    let back: Vec<TimingRow> = read_csv(&path).unwrap();
    assert_eq!(back, a);
}

#[test]
fn slope_of_a_power_law() {
    let xs = [10.0, 20.0, 40.0, 80.0];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.25)).collect();
    assert!((loglog_slope(&xs, &ys).unwrap() - 1.25).abs() < 1e-12);
}

#[test]
fn config_files_mirror_flags() {
    let kv = KeyValues::parse("n = 120\nmax_iters = 30 # cap\ninit = corrupt:2\nalpha = 0:60:6\n").unwrap();
    assert_eq!(kv.get::<usize>("n").unwrap(), Some(120));
    assert_eq!(kv.get::<usize>("max-iters").unwrap(), Some(30));
    assert_eq!(kv.get::<InitStrategy>("init").unwrap(), Some(InitStrategy::Corrupt(2)));
    assert_eq!(kv.get::<Range>("alpha").unwrap().unwrap().values().len(), 11);
    assert!(kv.get::<usize>("init").is_err());
    assert!(KeyValues::parse("n = 1\nn = 2\n").is_err());
}
