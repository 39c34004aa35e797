use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hyperclust::experiments::bench::{loglog_slope, timing_benchmark, TimingConfig};
use hyperclust::experiments::config::KeyValues;
use hyperclust::experiments::converge::{convergence_trace, ConvergenceConfig};
use hyperclust::experiments::phase::{phase_transition, GridConfig};
use hyperclust::experiments::uci::{read_votes, uci_votes_pipeline, UciConfig};
use hyperclust::experiments::{self as exp, InitStrategy, Range};
use hyperclust::sampler::{self, LogRegimeParams, ModelParams};
use hyperclust::seeds::{self, Stream};
use hyperclust::solver::{self, SolveOptions};
use hyperclust::{io, metrics, par, Execution};

#[derive(Parser)]
#[command(name = "hyperclust", version, about = "Exact community recovery in uniform hypergraphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "HYPERCLUST_THREADS")]
    threads: Option<usize>,
    /// `key = value` file; keys are long flag names, flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV (or assignment file for `solve`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a hypergraph from the block model.
    ///
    /// Give either --alpha/--beta (p = alpha ln n / n^(d-1), likewise q) or --p/--q.
    Sample(SampleArgs),
    /// Run projected tensor power iteration on a hypergraph file.
    #[command(after_help = "--trace CSV columns: iteration,objective,distance,elapsed_secs\n\
        (distance is empty without --truth)")]
    Solve(SolveArgs),
    /// Compare a predicted assignment with the truth.
    ///
    /// Prints one CSV row with header: distance,misclassification,exact
    Score(ScoreArgs),
    /// Success ratio over an (alpha, beta) grid.
    #[command(after_help = "Raw CSV columns: alpha,beta,trial,seed,status,success,iterations_run,\
misclassification,distance,edges,wall_ms\n\
<out>_ratio.csv: one row per alpha, one column per beta (empty = no trial in regime)\n\
<out>_threshold.csv: beta,alpha_threshold on the recovery boundary\n\
(sqrt(alpha) - sqrt(beta))^2 = K^(d-1) (d-1)!")]
    Phase(PhaseArgs),
    /// Distance-to-truth traces from random restarts on one instance.
    #[command(after_help = "CSV columns: restart,iteration,distance,objective\n\
<out>_restarts.csv: restart,seed,final_distance,hit_zero_at,iterations_run")]
    Converge(ConvergeArgs),
    /// Per-iteration wall time across sizes.
    #[command(after_help = "CSV columns: n,d,k,alpha,beta,edges,iterations_to_fixed_point,converged,\
timed_iterations,total_ms,per_iteration_ms")]
    Bench(BenchArgs),
    /// Congressional voting records pipeline.
    #[command(after_help = "CSV columns: seed,nodes,edges,best_restart,objective,iterations_run,\
misclassification,success,degenerate,wall_ms (one row per seed)")]
    Uci(UciArgs),
}

#[derive(Args)]
struct ModelFlags {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Hypergraph output file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Planted assignment output file.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    /// random | spectral | corrupt:<swaps> (corrupt needs --truth)
    #[arg(long)]
    init: Option<InitStrategy>,
    /// Iteration cap; defaults to the theoretical budget for n.
    #[arg(long)]
    max_iters: Option<usize>,
    /// Keep iterating after a fixed point.
    #[arg(long)]
    no_early_stop: bool,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    pred: Option<PathBuf>,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct PhaseArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// start:stop:step or a single value
    #[arg(long)]
    alpha: Option<Range>,
    #[arg(long)]
    beta: Option<Range>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    init: Option<InitStrategy>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated node counts.
    #[arg(long)]
    sizes: Option<List<usize>>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
}

#[derive(Args)]
struct UciArgs {
    /// house-votes-84.data
    #[arg(long)]
    data: Option<PathBuf>,
    /// Comma-separated 1-based issue indices.
    #[arg(long)]
    columns: Option<List<usize>>,
    #[arg(long)]
    edge_prob: Option<f64>,
    #[arg(long)]
    per_party: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Number of pipeline seeds, starting at --seed.
    #[arg(long)]
    seeds: Option<u64>,
}

#[derive(Clone, Debug)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|v| v.trim().parse().map_err(|e| format!("{v:?}: {e}")))
            .collect::<std::result::Result<_, _>>()
            .map(List)
    }
}

/// Command-line value, else config file value, else default.
struct Settings(KeyValues);

impl Settings {
    fn opt<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match cli {
            Some(v) => Ok(Some(v)),
            None => Ok(self.0.get(key)?),
        }
    }

    fn or<T: FromStr>(&self, cli: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.opt(cli, key)?.unwrap_or(default))
    }

    fn req<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<T>
    where
        T::Err: Display,
    {
        self.opt(cli, key)?.with_context(|| format!("--{key} is required"))
    }

    fn flag(&self, cli: bool, key: &str) -> Result<bool> {
        Ok(cli || self.0.get::<bool>(key)?.unwrap_or(false))
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let kv = match &cli.common.config {
        Some(path) => KeyValues::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => KeyValues::default(),
    };
    let s = Settings(kv);
    par::init_threads(s.opt(cli.common.threads, "threads")?);
    let seed = s.or(cli.common.seed, "seed", 0)?;
    let out = s.opt(cli.common.out.clone(), "out")?;
    let exec = if s.flag(cli.common.sequential, "sequential")? {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Sample(a) => sample(&s, a, seed),
        Command::Solve(a) => solve(&s, a, seed, out.as_deref(), exec),
        Command::Score(a) => score(&s, a),
        Command::Phase(a) => phase(&s, a, seed, &out.unwrap_or_else(|| "phase.csv".into()), exec),
        Command::Converge(a) => converge(&s, a, seed, &out.unwrap_or_else(|| "converge.csv".into()), exec),
        Command::Bench(a) => bench(&s, a, seed, &out.unwrap_or_else(|| "bench.csv".into())),
        Command::Uci(a) => uci(&s, a, seed, &out.unwrap_or_else(|| "uci.csv".into()), exec),
    }
}

fn log_params(s: &Settings, m: &ModelFlags, alpha: Option<f64>, beta: Option<f64>) -> Result<LogRegimeParams> {
    Ok(LogRegimeParams {
        n: s.req(m.n, "n")?,
        d: s.or(m.d, "d", 3)?,
        k: s.or(m.k, "k", 2)?,
        alpha: s.req(alpha, "alpha")?,
        beta: s.req(beta, "beta")?,
    })
}

fn sample(s: &Settings, a: SampleArgs, seed: u64) -> Result<()> {
    let graph_path: PathBuf = s.req(a.graph, "graph")?;
    let p = s.opt(a.p, "p")?;
    let params = match p {
        Some(p) => ModelParams {
            n: s.req(a.model.n, "n")?,
            d: s.or(a.model.d, "d", 3)?,
            k: s.or(a.model.k, "k", 2)?,
            p,
            q: s.req(a.q, "q")?,
        },
        None => log_params(s, &a.model, a.alpha, a.beta)?.to_probabilities()?,
    };
    params.validate()?;
    let truth = sampler::random_balanced(params.n, params.k, seeds::derive(seed, Stream::Truth))?;
    let g = sampler::sample(&params, &truth, seeds::derive(seed, Stream::Graph))?;
    io::write_hypergraph(&g, &graph_path)?;
    if let Some(path) = s.opt(a.truth, "truth")? {
        io::write_assignment(&truth, &path)?;
    }
    log::info!("sampled {} edges (p = {:e}, q = {:e})", g.num_edges(), params.p, params.q);
    Ok(())
}

fn solve(s: &Settings, a: SolveArgs, seed: u64, out: Option<&Path>, exec: Execution) -> Result<()> {
    let g = io::read_hypergraph(&s.req(a.graph, "graph")?)?;
    let k = s.req(a.k, "k")?;
    let truth = match s.opt(a.truth, "truth")? {
        Some(path) => Some(io::read_assignment(&path, Some(k))?),
        None => None,
    };
    let init = s.or(a.init, "init", InitStrategy::Random)?;
    let h0 = init.start(&g, k, truth.as_ref(), seeds::derive(seed, Stream::Init), exec)?;
    let max_iters = s.opt(a.max_iters, "max-iters")?;
    let trace_path = s.opt(a.trace, "trace")?;
    let opts = SolveOptions {
        early_stop: !s.flag(a.no_early_stop, "no-early-stop")?,
        record_trajectory: trace_path.is_some(),
        truth: truth.as_ref(),
        ..Default::default()
    };
    let report = solver::ptpm(&g, &h0, max_iters, &opts)?;
    if let Some(path) = trace_path {
        exp::write_csv(&report.trajectory, &path)?;
    }
    if let Some(path) = out {
        io::write_assignment(&report.final_assignment, path)?;
    }
    println!(
        "iterations={} fixed_point={} objective={}",
        report.iterations_run,
        report.converged_by_fixed_point,
        report.final_objective(&g)?
    );
    if let Some(t) = &truth {
        let al = metrics::align_and_distance(&report.final_assignment, t)?;
        println!("distance={} misclassification={}", al.distance, metrics::misclassification_rate(&report.final_assignment, t)?);
    }
    Ok(())
}

fn score(s: &Settings, a: ScoreArgs) -> Result<()> {
    let k = s.opt(a.k, "k")?;
    let truth = io::read_assignment(&s.req(a.truth, "truth")?, k)?;
    let pred = io::read_assignment(&s.req(a.pred, "pred")?, Some(truth.k()))?;
    let al = metrics::align_and_distance(&pred, &truth)?;
    let rate = metrics::misclassification_rate(&pred, &truth)?;
    println!("distance,misclassification,exact");
    println!("{},{},{}", al.distance, rate, al.overlap == truth.n());
    Ok(())
}

fn phase(s: &Settings, a: PhaseArgs, seed: u64, out: &Path, exec: Execution) -> Result<()> {
    let cfg = GridConfig {
        n: s.or(a.model.n, "n", 120)?,
        d: s.or(a.model.d, "d", 3)?,
        k: s.or(a.model.k, "k", 2)?,
        alpha: s.req(a.alpha, "alpha")?,
        beta: s.req(a.beta, "beta")?,
        trials: s.or(a.trials, "trials", 20)?,
        init: s.or(a.init, "init", InitStrategy::Spectral)?,
        max_iters: s.opt(a.max_iters, "max-iters")?,
        seed,
        execution: exec,
    };
    let result = phase_transition(&cfg)?;
    result.write(out)?;
    for (beta, alpha) in &result.threshold {
        log::info!("beta = {beta}: recovery boundary at alpha = {alpha:.3}");
    }
    Ok(())
}

fn converge(s: &Settings, a: ConvergeArgs, seed: u64, out: &Path, exec: Execution) -> Result<()> {
    let cfg = ConvergenceConfig {
        params: log_params(s, &a.model, a.alpha, a.beta)?,
        restarts: s.or(a.restarts, "restarts", 8)?,
        max_iters: s.or(a.max_iters, "max-iters", 30)?,
        early_stop: !s.flag(a.no_early_stop, "no-early-stop")?,
        seed,
        execution: exec,
    };
    let result = convergence_trace(&cfg)?;
    exp::write_csv(&result.rows, out)?;
    exp::write_csv(&result.restarts, &exp::sibling_path(out, "_restarts"))?;
    let hits = result.restarts.iter().filter(|r| r.final_distance == 0.0).count();
    log::info!("{hits}/{} restarts recovered the truth ({} edges)", result.restarts.len(), result.edges);
    Ok(())
}

fn bench(s: &Settings, a: BenchArgs, seed: u64, out: &Path) -> Result<()> {
    let sizes = s.or(a.sizes, "sizes", List(vec![120, 240, 480]))?.0;
    let (d, k) = (s.or(a.d, "d", 3)?, s.or(a.k, "k", 2)?);
    let (alpha, beta) = (s.or(a.alpha, "alpha", 33.0)?, s.or(a.beta, "beta", 8.0)?);
    let cfg = TimingConfig {
        params: sizes.iter().map(|&n| LogRegimeParams { n, d, k, alpha, beta }).collect(),
        timed_iterations: s.or(a.iterations, "iterations", 10)?,
        repetitions: s.or(a.repetitions, "repetitions", 3)?,
        seed,
    };
    let rows = timing_benchmark(&cfg)?;
    exp::write_csv(&rows, out)?;
    if rows.len() >= 2 {
        let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.per_iteration_ms).collect();
        log::info!("log-log slope of per-iteration time against n: {:.3}", loglog_slope(&xs, &ys)?);
    }
    Ok(())
}

fn uci(s: &Settings, a: UciArgs, seed: u64, out: &Path, exec: Execution) -> Result<()> {
    let data: PathBuf = s.req(a.data, "data")?;
    let records = read_votes(&data).with_context(|| format!("reading {}", data.display()))?;
    let defaults = UciConfig::default();
    let n_seeds = s.or(a.seeds, "seeds", 1)?;
    if n_seeds == 0 {
        bail!("--seeds must be >= 1");
    }
    let mut rows = Vec::new();
    for offset in 0..n_seeds {
        let cfg = UciConfig {
            columns: s.or(a.columns.clone(), "columns", List(defaults.columns.clone()))?.0,
            edge_prob: s.or(a.edge_prob, "edge-prob", defaults.edge_prob)?,
            per_party: s.or(a.per_party, "per-party", defaults.per_party)?,
            restarts: s.or(a.restarts, "restarts", defaults.restarts)?,
            max_iters: s.or(a.max_iters, "max-iters", defaults.max_iters)?,
            seed: seed.wrapping_add(offset),
            execution: exec,
        };
        let outcome = uci_votes_pipeline(&records, &cfg)?;
        log::info!(
            "seed {}: {} edges, misclassification {:.4}",
            cfg.seed,
            outcome.row.edges,
            outcome.row.misclassification
        );
        rows.push(outcome.row);
    }
    exp::write_csv(&rows, out)?;
    Ok(())
}
