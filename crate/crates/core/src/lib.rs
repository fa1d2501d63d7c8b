//! Ranking under prefix fairness constraints.
//!
//! Items `0..m` are placed into positions `0..n`; placing item `i` at
//! position `j` earns `W[i][j]`. Each property `l` is a set of items, and
//! for every prefix length `k` the number of property-`l` items among the
//! top `k` must lie in `[L[k][l], U[k][l]]`. Public indices are 0-based;
//! bounds and file formats use the 1-based `k` and `l` of the problem
//! statement.

pub mod approx;
pub mod dp;
pub mod error;
pub mod feasibility;
pub mod flow;
pub mod generators;
pub mod greedy;
pub mod io;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod outcome;
pub mod solve;

pub use approx::{solve_approx, ApproxReport};
pub use dp::{solve_dp, solve_dp_with_budget, DEFAULT_STATE_BUDGET};
pub use error::{Error, Result};
pub use feasibility::{abundance_check, feasibility_exact, AbundanceReport, Feasibility};
pub use flow::{solve_flow, solve_flow_detailed};
pub use generators::{gen_fractional_vertex, gen_from_hypergraph, gen_random, GenParams};
pub use greedy::solve_greedy;
pub use io::{instance_to_json, parse_instance, InstanceFile, SolutionFile};
pub use metrics::{check_monge, gen_weights, MetricKind, MetricSpec, MongeWitness, WeightMatrix};
pub use model::{
    check_constraints, ranking_value, validate_instance, BoundEntry, ConstraintReport, Instance,
    RawInstance, Ranking, WeightSource,
};
pub use oracle::{brute_force_solve, OracleResult};
pub use outcome::{Infeasible, Outcome};
pub use solve::{choose_algorithm, solve, Algorithm, Guarantee, Solution, SolveOptions};
