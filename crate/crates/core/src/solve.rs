//! Algorithm selection and a uniform result type over all solvers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::approx::{solve_approx, ViolationEntry};
use crate::dp::{estimate_states, solve_dp_with_budget};
use crate::error::{Error, Result};
use crate::flow::solve_flow;
use crate::greedy::solve_greedy;
use crate::model::{value_unchecked, Instance};
use crate::oracle::{brute_force_solve_capped, DEFAULT_ORACLE_CAP};
use crate::outcome::{Infeasible, Outcome};

/// State budget used when `auto` considers the dynamic program.
pub const AUTO_STATE_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Auto,
    Greedy,
    Dp,
    Flow,
    Approx,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Greedy => "greedy",
            Algorithm::Dp => "dp",
            Algorithm::Flow => "flow",
            Algorithm::Approx => "approx",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Algorithm::Auto, Algorithm::Greedy, Algorithm::Dp, Algorithm::Flow, Algorithm::Approx, Algorithm::Oracle]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    Exact,
    /// Value within `delta + 2` of the optimum, bounds exceeded by at most 2x.
    Approx { factor: usize },
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guarantee::Exact => f.write_str("exact"),
            Guarantee::Approx { .. } => f.write_str("(Δ+2)-approx"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// DP state budget for an explicit `dp` request.
    pub dp_budget: u128,
    /// DP state budget when `auto` weighs the dynamic program.
    pub auto_budget: u128,
    pub oracle_cap: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            dp_budget: crate::dp::DEFAULT_STATE_BUDGET,
            auto_budget: AUTO_STATE_BUDGET,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// The algorithm that actually ran.
    pub algorithm: Algorithm,
    pub guarantee: Guarantee,
    pub outcome: Outcome,
    /// Value of the ranking, `None` when infeasible.
    pub value: Option<f64>,
    /// Bounds exceeded by the ranking; empty for exact algorithms.
    pub violations: Vec<ViolationEntry>,
    pub warning: Option<String>,
}

/// The algorithm `auto` picks for `inst`.
///
/// Exact solvers need monotone Monge weights. With them: greedy for at most
/// one property per item and no lower bounds, flow for one property per item
/// with lower bounds, the dynamic program if its table fits `budget`.
/// Otherwise the approximation, which handles upper bounds only.
pub fn choose_algorithm(inst: &Instance, budget: u128) -> Result<Algorithm> {
    let lower = inst.has_lower_bounds();
    if inst.monge().holds() {
        if inst.delta() <= 1 {
            return Ok(if lower { Algorithm::Flow } else { Algorithm::Greedy });
        }
        if estimate_states(inst, budget) <= budget {
            return Ok(Algorithm::Dp);
        }
    }
    if !lower {
        return Ok(Algorithm::Approx);
    }
    let (k, l) = inst.first_lower_bound().expect("lower bounds present");
    let why = if inst.monge().holds() {
        format!("delta = {} with the dynamic program over budget", inst.delta())
    } else {
        "weights are not monotone Monge".to_string()
    };
    Err(Error::NoApplicable(format!(
        "{why}, and the approximation cannot honour the lower bound at (k={k}, l={})",
        l + 1
    )))
}

pub fn solve(inst: &Instance, algorithm: Algorithm, opts: &SolveOptions) -> Result<Solution> {
    let algorithm = match algorithm {
        Algorithm::Auto => choose_algorithm(inst, opts.auto_budget)?,
        a => a,
    };
    let exact = |outcome: Outcome| {
        let value = outcome.ranking().map(|r| value_unchecked(inst, r.items()));
        Solution { algorithm, guarantee: Guarantee::Exact, outcome, value, violations: vec![], warning: None }
    };
    Ok(match algorithm {
        Algorithm::Greedy => exact(solve_greedy(inst)?),
        Algorithm::Flow => exact(solve_flow(inst)?),
        Algorithm::Dp => exact(solve_dp_with_budget(inst, opts.dp_budget)?.outcome),
        Algorithm::Oracle => {
            let res = brute_force_solve_capped(inst, opts.oracle_cap)?;
            exact(res.ranking.map_or(Outcome::Infeasible(Infeasible::Exhausted), Outcome::Ranked))
        }
        Algorithm::Approx => {
            let rep = solve_approx(inst)?;
            Solution {
                algorithm,
                guarantee: Guarantee::Approx { factor: rep.guarantee },
                value: Some(rep.value),
                outcome: Outcome::Ranked(rep.ranking),
                violations: rep.violations,
                warning: rep.warning,
            }
        }
        Algorithm::Auto => unreachable!("auto resolved above"),
    })
}
