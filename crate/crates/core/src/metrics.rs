//! Value matrices derived from ranking-quality metrics, and the monotone
//! Monge test.
//!
//! All metrics assume the items are labelled by decreasing quality
//! (`a_1 >= a_2 >= ... >= a_m`), so the unconstrained optimum places item `i`
//! at position `i`. Under that labelling each metric below produces a matrix
//! that is non-increasing along rows and columns and satisfies the Monge
//! exchange inequality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// `a_i * f(j)` with a caller-supplied discount table.
    Rank1,
    /// `a_i / log2(j + 1)`.
    Dcg,
    /// `(m - j) * ln(a_i)`.
    BradleyTerry,
    /// `(2m - i - j) - |j - i|`.
    Footrule,
    /// `(2m - i - j)^2 - (j - i)^2`.
    Rho,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::Rank1,
        MetricKind::Dcg,
        MetricKind::BradleyTerry,
        MetricKind::Footrule,
        MetricKind::Rho,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Rank1 => "rank1",
            MetricKind::Dcg => "dcg",
            MetricKind::BradleyTerry => "bradley_terry",
            MetricKind::Footrule => "footrule",
            MetricKind::Rho => "rho",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A metric together with its per-item qualities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub kind: MetricKind,
    pub qualities: Vec<f64>,
    /// Discount table `f(1..n)`; only used (and required) by `Rank1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discount: Option<Vec<f64>>,
}

impl MetricSpec {
    pub fn new(kind: MetricKind, qualities: Vec<f64>) -> Self {
        MetricSpec { kind, qualities, discount: None }
    }

    pub fn rank1(qualities: Vec<f64>, discount: Vec<f64>) -> Self {
        MetricSpec { kind: MetricKind::Rank1, qualities, discount: Some(discount) }
    }

    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Metric(msg));
        if n > m {
            return bad(format!("n={n} exceeds m={m}"));
        }
        if self.qualities.len() != m {
            return bad(format!("{} qualities given for {m} items", self.qualities.len()));
        }
        for (i, &a) in self.qualities.iter().enumerate() {
            if !a.is_finite() || a < 0.0 {
                return bad(format!("quality of item {} is {a}; must be finite and non-negative", i + 1));
            }
        }
        if let Some(i) = self.qualities.windows(2).position(|w| w[0] < w[1]) {
            return bad(format!(
                "qualities must be sorted non-increasing; item {} ({}) is below item {} ({})",
                i + 1,
                self.qualities[i],
                i + 2,
                self.qualities[i + 1]
            ));
        }
        match self.kind {
            MetricKind::BradleyTerry => {
                if let Some(i) = self.qualities.iter().position(|&a| a < 1.0) {
                    return bad(format!(
                        "bradley_terry needs qualities >= 1 (item {} has {}); shift the qualities",
                        i + 1,
                        self.qualities[i]
                    ));
                }
            }
            MetricKind::Rank1 => {
                let Some(f) = &self.discount else {
                    return bad("rank1 needs a discount table".into());
                };
                if f.len() < n {
                    return bad(format!("discount table has {} entries, need {n}", f.len()));
                }
                if let Some(j) = f.iter().position(|&d| !d.is_finite() || d <= 0.0) {
                    return bad(format!("discount at position {} is {}; must be positive", j + 1, f[j]));
                }
                if let Some(j) = f.windows(2).position(|w| w[0] < w[1]) {
                    return bad(format!("discount increases at position {}", j + 2));
                }
            }
            _ => {}
        }
        if self.kind != MetricKind::Rank1 && self.discount.is_some() {
            return bad(format!("{} does not take a discount table", self.kind));
        }
        Ok(())
    }
}

/// Dense row-major `rows x cols` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        WeightMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        WeightMatrix { rows, cols, data }
    }

    /// Builds from nested rows. Ragged input is reported as an error.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Metric(format!(
                "matrix row {} has {} entries, expected {cols}",
                r + 1,
                rows[r].len()
            )));
        }
        Ok(WeightMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[f64]>::to_vec).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }
}

/// Lazily evaluated value matrix.
///
/// Metric-derived matrices are never materialized, so instances with
/// millions of items stay cheap.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Weights {
    Dense(WeightMatrix),
    /// `row[i] * col[j]`
    Separable { row: Vec<f64>, col: Vec<f64> },
    Footrule { m: usize },
    Rho { m: usize },
}

impl Weights {
    pub(crate) fn from_metric(spec: &MetricSpec, m: usize, n: usize) -> Self {
        match spec.kind {
            MetricKind::Rank1 => Weights::Separable {
                row: spec.qualities.clone(),
                col: spec.discount.as_ref().map(|f| f[..n].to_vec()).unwrap_or_default(),
            },
            MetricKind::Dcg => Weights::Separable {
                row: spec.qualities.clone(),
                col: (1..=n).map(|j| 1.0 / ((j + 1) as f64).log2()).collect(),
            },
            MetricKind::BradleyTerry => Weights::Separable {
                row: spec.qualities.iter().map(|a| a.ln()).collect(),
                col: (1..=n).map(|j| (m - j) as f64).collect(),
            },
            MetricKind::Footrule => Weights::Footrule { m },
            MetricKind::Rho => Weights::Rho { m },
        }
    }

    /// Value of placing item `i` at position `j` (both 0-based).
    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            Weights::Dense(w) => w.get(i, j),
            Weights::Separable { row, col } => row[i] * col[j],
            Weights::Footrule { m } => {
                let (m, i, j) = (*m as f64, (i + 1) as f64, (j + 1) as f64);
                (2.0 * m - i - j) - (j - i).abs()
            }
            Weights::Rho { m } => {
                let (m, i, j) = (*m as f64, (i + 1) as f64, (j + 1) as f64);
                (2.0 * m - i - j).powi(2) - (j - i).powi(2)
            }
        }
    }
}

/// Materializes the `m x n` value matrix of a metric.
pub fn gen_weights(spec: &MetricSpec, m: usize, n: usize) -> Result<WeightMatrix> {
    spec.validate(m, n)?;
    let w = Weights::from_metric(spec, m, n);
    Ok(WeightMatrix::from_fn(m, n, |i, j| w.get(i, j)))
}

/// Outcome of the monotone Monge test. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum MongeWitness {
    Holds,
    /// `W[i1][j] < W[i2][j]` with `i1 < i2`.
    IncreasingInItem { i1: usize, i2: usize, j: usize },
    /// `W[i][j1] < W[i][j2]` with `j1 < j2`.
    IncreasingInPosition { i: usize, j1: usize, j2: usize },
    /// `W[i1][j1] + W[i2][j2] < W[i1][j2] + W[i2][j1]`.
    Exchange { i1: usize, i2: usize, j1: usize, j2: usize },
}

impl MongeWitness {
    pub fn holds(&self) -> bool {
        matches!(self, MongeWitness::Holds)
    }

    /// Re-evaluates the witnessed inequality on `w`; true when it genuinely fails.
    pub fn violated_in(&self, w: &WeightMatrix) -> bool {
        match *self {
            MongeWitness::Holds => false,
            MongeWitness::IncreasingInItem { i1, i2, j } => i1 < i2 && w.get(i1, j) < w.get(i2, j),
            MongeWitness::IncreasingInPosition { i, j1, j2 } => {
                j1 < j2 && w.get(i, j1) < w.get(i, j2)
            }
            MongeWitness::Exchange { i1, i2, j1, j2 } => {
                i1 < i2
                    && j1 < j2
                    && w.get(i1, j1) + w.get(i2, j2) < w.get(i1, j2) + w.get(i2, j1)
            }
        }
    }
}

impl fmt::Display for MongeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MongeWitness::Holds => f.write_str("holds"),
            MongeWitness::IncreasingInItem { i1, i2, j } => write!(
                f,
                "column {} increases from item {} to item {}",
                j + 1,
                i1 + 1,
                i2 + 1
            ),
            MongeWitness::IncreasingInPosition { i, j1, j2 } => write!(
                f,
                "row {} increases from position {} to position {}",
                i + 1,
                j1 + 1,
                j2 + 1
            ),
            MongeWitness::Exchange { i1, i2, j1, j2 } => write!(
                f,
                "exchange inequality fails at items ({}, {}), positions ({}, {})",
                i1 + 1,
                i2 + 1,
                j1 + 1,
                j2 + 1
            ),
        }
    }
}

// Comparisons allow a relative slack so that products of sorted factors
// (a_i * f(j)) are not rejected over last-bit rounding.
const REL_TOL: f64 = 1e-12;

fn lt(lhs: f64, rhs: f64, scale: f64) -> bool {
    lhs < rhs - REL_TOL * scale
}

/// Monotone Monge test in `O(mn)`.
///
/// Only adjacent rows and columns are compared: monotonicity and the
/// exchange inequality on every adjacent 2x2 block imply them for every
/// pair, since the exchange gaps of a block telescope.
pub fn check_monge(w: &WeightMatrix) -> MongeWitness {
    let (m, n) = (w.rows(), w.cols());
    for i in 0..m {
        for j in 0..n {
            let here = w.get(i, j);
            if i + 1 < m {
                let below = w.get(i + 1, j);
                if lt(here, below, here.abs().max(below.abs())) {
                    return MongeWitness::IncreasingInItem { i1: i, i2: i + 1, j };
                }
            }
            if j + 1 < n {
                let right = w.get(i, j + 1);
                if lt(here, right, here.abs().max(right.abs())) {
                    return MongeWitness::IncreasingInPosition { i, j1: j, j2: j + 1 };
                }
            }
            if i + 1 < m && j + 1 < n {
                let (a, b, c, d) = (here, w.get(i + 1, j + 1), w.get(i, j + 1), w.get(i + 1, j));
                let scale = a.abs() + b.abs() + c.abs() + d.abs();
                if lt(a + b, c + d, scale) {
                    return MongeWitness::Exchange { i1: i, i2: i + 1, j1: j, j2: j + 1 };
                }
            }
        }
    }
    MongeWitness::Holds
}

/// Strict variant: every adjacent exchange gap and monotonicity step must be
/// strictly positive. Returns false for matrices with any tie.
pub fn is_strict_monge(w: &WeightMatrix) -> bool {
    let (m, n) = (w.rows(), w.cols());
    for i in 0..m {
        for j in 0..n {
            let here = w.get(i, j);
            if i + 1 < m && here <= w.get(i + 1, j) {
                return false;
            }
            if j + 1 < n && here <= w.get(i, j + 1) {
                return false;
            }
            if i + 1 < m
                && j + 1 < n
                && here + w.get(i + 1, j + 1) <= w.get(i, j + 1) + w.get(i + 1, j)
            {
                return false;
            }
        }
    }
    true
}
