//! JSON instance and solution files.
//!
//! Items, positions and properties are 1-based in every file. Instance
//! layout:
//!
//! ```json
//! {"m": 4, "n": 3,
//!  "properties": [[1, 3], [2, 4]],
//!  "lower": [{"k": 2, "l": 2, "value": 1}],
//!  "upper": [{"k": 1, "l": 1, "value": 1}],
//!  "weights": {"kind": "dcg", "qualities": [4, 3, 2, 1]}}
//! ```
//!
//! `weights` is either `{"kind": "explicit", "matrix": [[...], ...]}` or a
//! metric (`rank1`, `dcg`, `bradley_terry`, `footrule`, `rho`) with
//! `qualities` and, for `rank1` only, `discount`. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{MetricKind, MetricSpec, WeightMatrix};
use crate::model::{BoundEntry, Instance, RawInstance, Ranking, WeightSource, MAX_EXPLICIT_CELLS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundFile {
    pub k: usize,
    pub l: usize,
    pub value: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Explicit,
    Rank1,
    Dcg,
    BradleyTerry,
    Footrule,
    Rho,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub kind: WeightKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qualities: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discount: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub properties: Vec<Vec<usize>>,
    #[serde(default)]
    pub lower: Vec<BoundFile>,
    #[serde(default)]
    pub upper: Vec<BoundFile>,
    pub weights: WeightsFile,
}

fn metric_kind(kind: WeightKind) -> Option<MetricKind> {
    match kind {
        WeightKind::Explicit => None,
        WeightKind::Rank1 => Some(MetricKind::Rank1),
        WeightKind::Dcg => Some(MetricKind::Dcg),
        WeightKind::BradleyTerry => Some(MetricKind::BradleyTerry),
        WeightKind::Footrule => Some(MetricKind::Footrule),
        WeightKind::Rho => Some(MetricKind::Rho),
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let raw = inst.to_raw();
        let bounds = |v: &[BoundEntry]| v.iter().map(|b| BoundFile { k: b.k, l: b.l, value: b.value }).collect();
        let weights = match &raw.weights {
            WeightSource::Explicit(w) => WeightsFile {
                kind: WeightKind::Explicit,
                matrix: Some(w.to_rows()),
                qualities: None,
                discount: None,
            },
            WeightSource::Metric(spec) => WeightsFile {
                kind: match spec.kind {
                    MetricKind::Rank1 => WeightKind::Rank1,
                    MetricKind::Dcg => WeightKind::Dcg,
                    MetricKind::BradleyTerry => WeightKind::BradleyTerry,
                    MetricKind::Footrule => WeightKind::Footrule,
                    MetricKind::Rho => WeightKind::Rho,
                },
                matrix: None,
                qualities: Some(spec.qualities.clone()),
                discount: spec.discount.clone(),
            },
        };
        InstanceFile {
            m: raw.m,
            n: raw.n,
            properties: raw.properties,
            lower: bounds(&raw.lower),
            upper: bounds(&raw.upper),
            weights,
        }
    }

    pub fn to_raw(&self) -> Result<RawInstance> {
        let w = &self.weights;
        let weights = match metric_kind(w.kind) {
            None => {
                if w.qualities.is_some() || w.discount.is_some() {
                    return Err(Error::Format("explicit weights take only \"matrix\"".into()));
                }
                let rows = w.matrix.as_ref().ok_or_else(|| Error::Format("explicit weights need \"matrix\"".into()))?;
                let cells = rows.iter().map(Vec::len).sum::<usize>();
                if cells > MAX_EXPLICIT_CELLS {
                    return Err(Error::Format(format!(
                        "explicit matrix has {cells} cells, above the limit of {MAX_EXPLICIT_CELLS}; \
                         describe large instances with a metric instead"
                    )));
                }
                WeightSource::Explicit(WeightMatrix::from_rows(rows)?)
            }
            Some(kind) => {
                if w.matrix.is_some() {
                    return Err(Error::Format(format!("{kind} weights do not take \"matrix\"")));
                }
                let qualities = w.qualities.clone().ok_or_else(|| Error::Format(format!("{kind} weights need \"qualities\"")))?;
                WeightSource::Metric(MetricSpec { kind, qualities, discount: w.discount.clone() })
            }
        };
        let bounds = |v: &[BoundFile]| v.iter().map(|b| BoundEntry { k: b.k, l: b.l, value: b.value }).collect();
        Ok(RawInstance {
            m: self.m,
            n: self.n,
            properties: self.properties.clone(),
            lower: bounds(&self.lower),
            upper: bounds(&self.upper),
            weights,
        })
    }

    pub fn to_instance(&self) -> Result<Instance> {
        Instance::new(self.to_raw()?)
    }
}

pub fn parse_instance(json: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    file.to_instance()
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance files always serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationFile {
    pub k: usize,
    pub l: usize,
    pub count: u32,
    pub bound: u32,
    /// `null` when the bound is zero.
    pub factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    /// 1-based items, best position first.
    pub ranking: Vec<usize>,
    pub value: f64,
    pub algorithm: String,
    /// `"exact"` or `"(Δ+2)-approx"`.
    pub guarantee: String,
    pub violations: Vec<ViolationFile>,
    pub runtime_ms: f64,
}

/// Reads a ranking given either as a bare array or as a solution file.
pub fn parse_ranking(json: &str, m: usize) -> Result<Ranking> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Shape {
        Bare(Vec<usize>),
        Wrapped { ranking: Vec<usize> },
    }
    let shape: Shape = serde_json::from_str(json)
        .map_err(|_| Error::Format("expected a JSON array of items or an object with \"ranking\"".into()))?;
    let items = match shape {
        Shape::Bare(v) | Shape::Wrapped { ranking: v } => v,
    };
    Ranking::from_one_based(&items, m)
}
