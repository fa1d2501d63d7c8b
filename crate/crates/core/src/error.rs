use std::fmt;

use crate::metrics::MongeWitness;

/// A single problem found while validating an instance description.
///
/// Item, position and property indices are reported 1-based, matching the
/// file formats.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    EmptyDimension { what: &'static str },
    TooFewItems { m: usize, n: usize },
    EmptyProperty { property: usize },
    ItemOutOfRange { property: usize, item: usize, m: usize },
    DuplicateItem { property: usize, item: usize },
    PositionOutOfRange { k: usize, n: usize },
    PropertyOutOfRange { property: usize, p: usize },
    DuplicateBound { kind: BoundKind, k: usize, property: usize },
    UpperAbovePrefix { k: usize, property: usize, value: u32 },
    LowerAboveUpper { k: usize, property: usize, lower: u32, upper: u32 },
    NonMonotone { kind: BoundKind, k: usize, property: usize, prev: u32, value: u32 },
    WeightShape { expected: (usize, usize), found: (usize, usize) },
    WeightValue { item: usize, position: usize, value: f64 },
    Metric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Lower => f.write_str("lower"),
            BoundKind::Upper => f.write_str("upper"),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            EmptyDimension { what } => write!(f, "{what} must be positive"),
            TooFewItems { m, n } => write!(f, "n ≤ m violated (n={n}, m={m})"),
            EmptyProperty { property } => write!(f, "property {property} has no items"),
            ItemOutOfRange { property, item, m } => {
                write!(f, "property {property} lists item {item} outside 1..={m}")
            }
            DuplicateItem { property, item } => {
                write!(f, "property {property} lists item {item} twice")
            }
            PositionOutOfRange { k, n } => write!(f, "bound position k={k} outside 1..={n}"),
            PropertyOutOfRange { property, p } => {
                write!(f, "bound property l={property} outside 1..={p}")
            }
            DuplicateBound { kind, k, property } => {
                write!(f, "{kind} bound (k={k}, l={property}) given twice")
            }
            UpperAbovePrefix { k, property, value } => {
                write!(f, "upper bound {value} at (k={k}, l={property}) exceeds k")
            }
            LowerAboveUpper { k, property, lower, upper } => {
                write!(f, "lower bound {lower} exceeds upper bound {upper} at (k={k}, l={property})")
            }
            NonMonotone { kind, k, property, prev, value } => write!(
                f,
                "{kind} bounds of property {property} decrease from {prev} to {value} at k={k}"
            ),
            WeightShape { expected, found } => write!(
                f,
                "weight matrix is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            WeightValue { item, position, value } => write!(
                f,
                "weight at (item {item}, position {position}) is {value}; weights must be finite and non-negative"
            ),
            Metric(msg) => f.write_str(msg),
        }
    }
}

/// Why a solver declined to run on an instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Precondition {
    /// Some item carries more properties than the solver supports.
    Delta { item: usize, delta: usize, max: usize },
    /// The solver handles upper bounds only.
    LowerBounds { k: usize, property: usize },
    NotMonge(MongeWitness),
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::Delta { item, delta, max } => write!(
                f,
                "item {item} has {delta} properties; this solver needs at most {max}"
            ),
            Precondition::LowerBounds { k, property } => write!(
                f,
                "nonzero lower bound at (k={k}, l={property}); this solver handles upper bounds only"
            ),
            Precondition::NotMonge(w) => write!(f, "weights are not monotone Monge: {w}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    Invalid(Vec<ValidationIssue>),
    #[error("invalid metric: {0}")]
    Metric(String),
    #[error("invalid ranking: {0}")]
    Ranking(String),
    #[error("precondition failed: {0}")]
    Precondition(Precondition),
    #[error("enumeration of {count} assignments exceeds the cap of {cap}")]
    OracleCap { count: u128, cap: u128 },
    #[error("instance has {m} items, above the exact-feasibility cap of {cap}")]
    FeasibilityCap { m: usize, cap: usize },
    #[error("dynamic program needs about {estimate} states, above the budget of {budget}")]
    StateBudget { estimate: u128, budget: u128 },
    #[error("scaled flow costs overflow: {0}")]
    Overflow(String),
    #[error("gap filling found no admissible item for position {position}")]
    DeadEnd { position: usize },
    #[error("inconsistent generator parameters: {0}")]
    Params(String),
    #[error("no applicable algorithm: {0}")]
    NoApplicable(String),
    #[error("malformed file: {0}")]
    Format(String),
}

fn join(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
