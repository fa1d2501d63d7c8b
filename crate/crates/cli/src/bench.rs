//! Benchmark suites.
//!
//! A suite file lists entries; each entry expands into `count` generated
//! instances with seeds `params.seed, params.seed + 1, ...`:
//!
//! ```json
//! {"entries": [{"name": "small", "count": 100,
//!               "algorithms": ["greedy", "approx"], "oracle": true,
//!               "params": {"m": 7, "n": 4, "p": 2, "delta": 1, "theta": 0.5}}]}
//! ```
//!
//! Rows come out in suite order whatever order the workers finish in.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use fairrank::generators::GenMetric;
use fairrank::oracle::{brute_force_solve_capped, falling_factorial};
use fairrank::{gen_random, solve, Algorithm, GenParams, SolveOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::plot;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub entries: Vec<SuiteEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    #[serde(default)]
    pub name: String,
    pub params: GenParams,
    #[serde(default = "one")]
    pub count: u64,
    pub algorithms: Vec<Algorithm>,
    /// Also compute the exact optimum by enumeration, when small enough.
    #[serde(default)]
    pub oracle: bool,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub entry: String,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub delta: usize,
    pub weights: String,
    pub theta: f64,
    pub lower_rate: f64,
    pub seed: u64,
    pub algorithm: String,
    pub status: String,
    pub value: Option<f64>,
    pub oracle_value: Option<f64>,
    pub ratio: Option<f64>,
    pub max_violation_factor: Option<f64>,
    pub runtime_ms: f64,
}

fn weights_name(metric: &GenMetric) -> String {
    match metric {
        GenMetric::Metric { metric } => metric.name().to_string(),
        GenMetric::RandomMonge { .. } => "random_monge".to_string(),
    }
}

fn run_instance(entry: &SuiteEntry, params: &GenParams, opts: &SolveOptions) -> Vec<Row> {
    let base = |algorithm: &str, status: String| Row {
        entry: entry.name.clone(),
        m: params.m,
        n: params.n,
        p: params.p,
        delta: params.delta,
        weights: weights_name(&params.metric),
        theta: params.theta,
        lower_rate: params.lower_rate,
        seed: params.seed,
        algorithm: algorithm.to_string(),
        status,
        value: None,
        oracle_value: None,
        ratio: None,
        max_violation_factor: None,
        runtime_ms: 0.0,
    };
    let inst = match gen_random(params) {
        Ok(inst) => inst,
        Err(e) => return vec![base("-", format!("generator error: {e}"))],
    };
    let oracle = (entry.oracle && falling_factorial(inst.m(), inst.n()) <= opts.oracle_cap)
        .then(|| brute_force_solve_capped(&inst, opts.oracle_cap).ok())
        .flatten();

    entry
        .algorithms
        .iter()
        .map(|&algo| {
            let start = Instant::now();
            let result = solve(&inst, algo, opts);
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            let mut row = match result {
                Ok(sol) => {
                    let mut row = base(sol.algorithm.name(), String::new());
                    row.algorithm = if algo == Algorithm::Auto {
                        format!("auto:{}", sol.algorithm)
                    } else {
                        sol.algorithm.to_string()
                    };
                    row.status = if sol.outcome.is_feasible() { "ok" } else { "infeasible" }.to_string();
                    row.value = sol.value;
                    row.max_violation_factor = Some(
                        sol.violations.iter().map(|v| v.factor).fold(1.0, f64::max),
                    );
                    row
                }
                Err(e) => base(algo.name(), format!("error: {e}")),
            };
            row.runtime_ms = runtime_ms;
            if let Some(o) = &oracle {
                row.oracle_value = o.ranking.as_ref().map(|_| o.value);
                row.ratio = match (row.value, row.oracle_value) {
                    (Some(v), Some(o)) if o > 0.0 => Some(v / o),
                    (Some(v), Some(o)) if v == o => Some(1.0),
                    _ => None,
                };
            }
            row
        })
        .collect()
}

pub fn run_suite(suite: &Suite, opts: &SolveOptions) -> Vec<Row> {
    let jobs: Vec<(&SuiteEntry, GenParams)> = suite
        .entries
        .iter()
        .flat_map(|e| {
            (0..e.count).map(move |r| {
                let mut params = e.params.clone();
                params.seed = e.params.seed.wrapping_add(r);
                (e, params)
            })
        })
        .collect();
    jobs.par_iter()
        .map(|(entry, params)| run_instance(entry, params, opts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn cmd_bench(
    suite_path: &Path,
    out: &Path,
    plots: Option<&Path>,
    threads: Option<usize>,
    opts: &SolveOptions,
) -> anyhow::Result<()> {
    let text = fs::read_to_string(suite_path).with_context(|| format!("reading {}", suite_path.display()))?;
    let suite: Suite = serde_json::from_str(&text).with_context(|| format!("parsing {}", suite_path.display()))?;
    let rows = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("starting worker threads")?
            .install(|| run_suite(&suite, opts)),
        None => run_suite(&suite, opts),
    };
    let mut writer = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    if let Some(dir) = plots {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("value_ratio.svg"), plot::ratio_chart(&rows))?;
        fs::write(dir.join("runtime.svg"), plot::runtime_chart(&rows))?;
    }
    eprintln!("{} runs written to {}", rows.len(), out.display());
    Ok(())
}
