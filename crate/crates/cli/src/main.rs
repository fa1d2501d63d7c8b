use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fairrank::generators::{GenMetric, QualityDist};
use fairrank::io::{parse_ranking, ViolationFile};
use fairrank::{
    check_constraints, gen_fractional_vertex, gen_random, instance_to_json, parse_instance, ranking_value, solve,
    Algorithm, Error, GenParams, Instance, MetricKind, SolutionFile, SolveOptions,
};
use serde::Serialize;

mod bench;
mod plot;

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_NO_ALGORITHM: u8 = 3;

/// Ranking under prefix fairness constraints.
///
/// Exit codes: 0 success, 1 error, 2 infeasible, 3 no applicable algorithm.
/// FAIRRANK_STATE_BUDGET overrides the dynamic-program state cap.
#[derive(Parser)]
#[command(name = "fairrank", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the solution as JSON.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Write the solution here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate a ranking (array or solution file) against an instance.
    Check { instance: PathBuf, ranking: PathBuf },
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run a benchmark suite and write one CSV row per run.
    Bench {
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Directory for SVG charts of value ratio and runtime.
        #[arg(long)]
        plots: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Greedy,
    Dp,
    Flow,
    Approx,
    Oracle,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Auto => Algorithm::Auto,
            Algo::Greedy => Algorithm::Greedy,
            Algo::Dp => Algorithm::Dp,
            Algo::Flow => Algorithm::Flow,
            Algo::Approx => Algorithm::Approx,
            Algo::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenWeights {
    Rank1,
    Dcg,
    BradleyTerry,
    Footrule,
    Rho,
    RandomMonge,
}

#[derive(Args)]
struct GenArgs {
    /// Emit the fixed 4x4 single-property fixture instead of a random instance.
    #[arg(long)]
    fixture: bool,
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    delta: usize,
    #[arg(long, value_enum, default_value_t = GenWeights::Dcg)]
    weights: GenWeights,
    /// Rank-one terms of a random Monge matrix.
    #[arg(long, default_value_t = 3)]
    terms: usize,
    /// Largest factor entry of a random Monge matrix.
    #[arg(long, default_value_t = 9)]
    max: u32,
    #[arg(long, default_value_t = 1.0)]
    quality_lo: f64,
    #[arg(long, default_value_t = 10.0)]
    quality_hi: f64,
    /// Draw integer qualities in [quality_lo, quality_hi].
    #[arg(long)]
    integer_qualities: bool,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    lower_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl GenArgs {
    fn params(&self) -> GenParams {
        let metric = match self.weights {
            GenWeights::RandomMonge => GenMetric::RandomMonge { terms: self.terms, max: self.max },
            GenWeights::Rank1 => GenMetric::Metric { metric: MetricKind::Rank1 },
            GenWeights::Dcg => GenMetric::Metric { metric: MetricKind::Dcg },
            GenWeights::BradleyTerry => GenMetric::Metric { metric: MetricKind::BradleyTerry },
            GenWeights::Footrule => GenMetric::Metric { metric: MetricKind::Footrule },
            GenWeights::Rho => GenMetric::Metric { metric: MetricKind::Rho },
        };
        let qualities = if self.integer_qualities {
            QualityDist::Integers { lo: self.quality_lo as u32, hi: self.quality_hi as u32 }
        } else {
            QualityDist::Uniform { lo: self.quality_lo, hi: self.quality_hi }
        };
        GenParams {
            m: self.m,
            n: self.n,
            p: self.p,
            delta: self.delta,
            metric,
            qualities,
            theta: self.theta,
            lower_rate: self.lower_rate,
            seed: self.seed,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let no_algorithm = err
                .chain()
                .any(|e| matches!(e.downcast_ref::<Error>(), Some(Error::NoApplicable(_))));
            ExitCode::from(if no_algorithm { EXIT_NO_ALGORITHM } else { EXIT_ERROR })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Solve { instance, algo, output } => cmd_solve(&instance, algo.into(), output.as_deref()),
        Command::Check { instance, ranking } => cmd_check(&instance, &ranking),
        Command::Gen(args) => {
            let inst = if args.fixture { gen_fractional_vertex() } else { gen_random(&args.params())? };
            emit(&instance_to_json(&inst), args.output.as_deref())?;
            Ok(0)
        }
        Command::Bench { suite, out, plots, threads } => {
            bench::cmd_bench(&suite, &out, plots.as_deref(), threads, &solve_options()?)?;
            Ok(0)
        }
    }
}

pub(crate) fn solve_options() -> anyhow::Result<SolveOptions> {
    let mut opts = SolveOptions::default();
    if let Ok(raw) = std::env::var("FAIRRANK_STATE_BUDGET") {
        let budget: u128 = raw
            .trim()
            .parse()
            .with_context(|| format!("FAIRRANK_STATE_BUDGET={raw:?} is not a non-negative integer"))?;
        opts.dp_budget = budget;
        opts.auto_budget = budget;
    }
    Ok(opts)
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("loading {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(path: &Path, algo: Algorithm, output: Option<&Path>) -> anyhow::Result<u8> {
    let inst = read_instance(path)?;
    let opts = solve_options()?;
    let start = Instant::now();
    let sol = solve(&inst, algo, &opts)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(w) = &sol.warning {
        eprintln!("warning: {w}");
    }
    let Some(ranking) = sol.outcome.ranking() else {
        if let fairrank::Outcome::Infeasible(why) = &sol.outcome {
            eprintln!("infeasible ({}): {why}", sol.algorithm);
        }
        return Ok(EXIT_INFEASIBLE);
    };
    let file = SolutionFile {
        ranking: ranking.to_one_based(),
        value: sol.value.expect("ranked outcome has a value"),
        algorithm: sol.algorithm.name().to_string(),
        guarantee: sol.guarantee.to_string(),
        violations: sol
            .violations
            .iter()
            .map(|v| ViolationFile {
                k: v.k,
                l: v.l,
                count: v.count,
                bound: v.bound,
                factor: v.factor.is_finite().then_some(v.factor),
            })
            .collect(),
        runtime_ms,
    };
    emit(&serde_json::to_string_pretty(&file)?, output)?;
    Ok(0)
}

#[derive(Serialize)]
struct CheckEntry {
    k: usize,
    l: usize,
    count: u32,
    lower: u32,
    upper: u32,
    factor: Option<f64>,
}

#[derive(Serialize)]
struct CheckReport {
    value: f64,
    feasible: bool,
    max_violation_factor: Option<f64>,
    violations: Vec<CheckEntry>,
}

fn cmd_check(instance: &Path, ranking: &Path) -> anyhow::Result<u8> {
    let inst = read_instance(instance)?;
    let text = fs::read_to_string(ranking).with_context(|| format!("reading {}", ranking.display()))?;
    let r = parse_ranking(&text, inst.m()).with_context(|| format!("loading {}", ranking.display()))?;
    if r.len() != inst.n() {
        bail!("ranking has {} items but the instance has n = {} positions", r.len(), inst.n());
    }
    let report = check_constraints(&inst, &r)?;
    let finite = |f: f64| f.is_finite().then_some(f);
    let out = CheckReport {
        value: ranking_value(&inst, &r)?,
        feasible: report.feasible,
        max_violation_factor: finite(report.max_violation_factor),
        violations: report
            .violations()
            .map(|e| CheckEntry {
                k: e.k,
                l: e.l,
                count: e.count,
                lower: e.lower,
                upper: e.upper,
                factor: finite(e.factor),
            })
            .collect(),
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if report.feasible { 0 } else { EXIT_INFEASIBLE })
}
