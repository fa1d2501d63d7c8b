use std::fmt;

use crate::model::Ranking;

/// Result of an exact solver run.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Ranked(Ranking),
    Infeasible(Infeasible),
}

impl Outcome {
    pub fn ranking(&self) -> Option<&Ranking> {
        match self {
            Outcome::Ranked(r) => Some(r),
            Outcome::Infeasible(_) => None,
        }
    }

    pub fn into_ranking(self) -> Option<Ranking> {
        match self {
            Outcome::Ranked(r) => Some(r),
            Outcome::Infeasible(_) => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Ranked(_))
    }
}

/// Evidence of infeasibility. Positions and properties are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasible {
    /// Greedy found nothing to place at this position.
    NoAdmissibleItem { position: usize },
    /// No full-length state of the dynamic program is reachable.
    NoCompleteState,
    /// The network admits less than `n` units of flow.
    FlowShort { flow: usize, needed: usize },
    /// A mandatory lower-bound arc stayed empty in the optimal flow.
    LowerBoundUnmet { k: usize, property: usize },
    /// Exhaustive search found no feasible ranking.
    Exhausted,
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Infeasible::NoAdmissibleItem { position } => {
                write!(f, "no admissible item for position {position}")
            }
            Infeasible::NoCompleteState => f.write_str("no feasible state covers all positions"),
            Infeasible::FlowShort { flow, needed } => {
                write!(f, "maximum flow {flow} is below the {needed} positions")
            }
            Infeasible::LowerBoundUnmet { k, property } => {
                write!(f, "lower bound at (k={k}, l={property}) cannot be met")
            }
            Infeasible::Exhausted => f.write_str("no ranking satisfies every constraint"),
        }
    }
}
