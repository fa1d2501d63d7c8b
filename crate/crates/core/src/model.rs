//! Instances, rankings and constraint evaluation.
//!
//! Indexing convention: every public type in this module uses 0-based item,
//! position and property indices, except [`RawInstance`] and [`BoundEntry`]
//! which mirror the file format and are 1-based. Prefix bounds are addressed
//! by prefix length `k` in `1..=n`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{BoundKind, Error, Precondition, Result, ValidationIssue};
use crate::metrics::{check_monge, MetricSpec, MongeWitness, WeightMatrix, Weights};

/// Largest explicit matrix accepted; bigger inputs should use a metric.
pub const MAX_EXPLICIT_CELLS: usize = 10_000_000;

/// A single bound `value` on the number of property-`l` items in the top `k`.
/// Both `k` and `l` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundEntry {
    pub k: usize,
    pub l: usize,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSource {
    Explicit(WeightMatrix),
    Metric(MetricSpec),
}

/// Unvalidated instance description, 1-based like the file format.
#[derive(Debug, Clone, PartialEq)]
pub struct RawInstance {
    pub m: usize,
    pub n: usize,
    pub properties: Vec<Vec<usize>>,
    pub lower: Vec<BoundEntry>,
    pub upper: Vec<BoundEntry>,
    pub weights: WeightSource,
}

/// A validated, normalized problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    m: usize,
    n: usize,
    /// Sorted 0-based members of each property.
    properties: Vec<Vec<usize>>,
    /// Row `k - 1` holds the bounds of every property for the top `k`.
    lower: Vec<u32>,
    upper: Vec<u32>,
    source: WeightSource,
    weights: Weights,
    /// Property memberships of each item (CSR layout).
    member_offsets: Vec<usize>,
    member_props: Vec<u32>,
}

impl Instance {
    /// Validates `raw`, filling defaults: `U = k`, and an unspecified `L`
    /// repeats the bound of the next shorter prefix (0 at `k = 1`).
    pub fn new(raw: RawInstance) -> Result<Self> {
        validate_instance(raw)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.properties.len()
    }

    pub fn properties(&self) -> &[Vec<usize>] {
        &self.properties
    }

    /// Lower bound on property `l` in the top `k` (`k` in `1..=n`).
    #[inline]
    pub fn lower(&self, k: usize, l: usize) -> u32 {
        self.lower[(k - 1) * self.p() + l]
    }

    /// Upper bound on property `l` in the top `k` (`k` in `1..=n`).
    #[inline]
    pub fn upper(&self, k: usize, l: usize) -> u32 {
        self.upper[(k - 1) * self.p() + l]
    }

    pub fn has_lower_bounds(&self) -> bool {
        self.lower.iter().any(|&v| v > 0)
    }

    /// First `(k, l)` with a nonzero lower bound.
    pub fn first_lower_bound(&self) -> Option<(usize, usize)> {
        let p = self.p();
        self.lower.iter().position(|&v| v > 0).map(|idx| (idx / p + 1, idx % p))
    }

    pub fn weight_source(&self) -> &WeightSource {
        &self.source
    }

    /// Value of placing item `i` at position `j`.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    pub fn weight_matrix(&self) -> WeightMatrix {
        match &self.weights {
            Weights::Dense(w) => w.clone(),
            w => WeightMatrix::from_fn(self.m, self.n, |i, j| w.get(i, j)),
        }
    }

    /// Properties of item `i`, ascending.
    #[inline]
    pub fn item_properties(&self, i: usize) -> &[u32] {
        &self.member_props[self.member_offsets[i]..self.member_offsets[i + 1]]
    }

    /// Largest number of properties on a single item, with that item.
    pub fn max_degree(&self) -> (usize, usize) {
        (0..self.m)
            .map(|i| (self.member_offsets[i + 1] - self.member_offsets[i], i))
            .fold((0, 0), |best, cur| if cur.0 > best.0 { cur } else { best })
    }

    pub fn delta(&self) -> usize {
        self.max_degree().0
    }

    /// Monge test of the value matrix. Metric-derived weights satisfy it
    /// by construction and are not re-scanned.
    pub fn monge(&self) -> MongeWitness {
        match &self.weights {
            Weights::Dense(w) => check_monge(w),
            _ => MongeWitness::Holds,
        }
    }

    pub(crate) fn require_monge(&self) -> Result<()> {
        match self.monge() {
            MongeWitness::Holds => Ok(()),
            w => Err(Error::Precondition(Precondition::NotMonge(w))),
        }
    }

    pub(crate) fn require_delta(&self, max: usize) -> Result<()> {
        let (delta, item) = self.max_degree();
        if delta > max {
            return Err(Error::Precondition(Precondition::Delta { item: item + 1, delta, max }));
        }
        Ok(())
    }

    pub(crate) fn require_no_lower(&self) -> Result<()> {
        match self.first_lower_bound() {
            Some((k, l)) => Err(Error::Precondition(Precondition::LowerBounds { k, property: l + 1 })),
            None => Ok(()),
        }
    }

    /// Re-expresses the instance in the 1-based raw form, listing only
    /// non-default bounds (lower bounds only where they rise). Validating the
    /// result gives back `self`.
    pub fn to_raw(&self) -> RawInstance {
        let p = self.p();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for k in 1..=self.n {
            for l in 0..p {
                let (lo, up) = (self.lower(k, l), self.upper(k, l));
                let before = if k > 1 { self.lower(k - 1, l) } else { 0 };
                if lo > before {
                    lower.push(BoundEntry { k, l: l + 1, value: lo });
                }
                if (up as usize) < k {
                    upper.push(BoundEntry { k, l: l + 1, value: up });
                }
            }
        }
        RawInstance {
            m: self.m,
            n: self.n,
            properties: self.properties.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect(),
            lower,
            upper,
            weights: self.source.clone(),
        }
    }
}

/// Checks a raw description and returns the normalized instance, or every
/// problem found.
pub fn validate_instance(raw: RawInstance) -> Result<Instance> {
    let RawInstance { m, n, properties, lower, upper, weights: source } = raw;
    let mut issues = Vec::new();
    if m == 0 {
        issues.push(ValidationIssue::EmptyDimension { what: "m" });
    }
    if n == 0 {
        issues.push(ValidationIssue::EmptyDimension { what: "n" });
    }
    if n > m {
        issues.push(ValidationIssue::TooFewItems { m, n });
    }
    if !issues.is_empty() {
        return Err(Error::Invalid(issues));
    }

    let p = properties.len();
    let mut props = Vec::with_capacity(p);
    for (l, members) in properties.into_iter().enumerate() {
        if members.is_empty() {
            issues.push(ValidationIssue::EmptyProperty { property: l + 1 });
        }
        let mut sorted = Vec::with_capacity(members.len());
        for item in members {
            if item == 0 || item > m {
                issues.push(ValidationIssue::ItemOutOfRange { property: l + 1, item, m });
            } else {
                sorted.push(item - 1);
            }
        }
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                issues.push(ValidationIssue::DuplicateItem { property: l + 1, item: w[0] + 1 });
            }
        }
        sorted.dedup();
        props.push(sorted);
    }

    let mut lo = vec![0u32; n * p];
    let mut lower_given = vec![false; n * p];
    let mut up: Vec<u32> = (1..=n).flat_map(|k| std::iter::repeat_n(k as u32, p)).collect();
    for (kind, entries, table) in
        [(BoundKind::Lower, &lower, &mut lo), (BoundKind::Upper, &upper, &mut up)]
    {
        let mut seen = BTreeMap::new();
        for e in entries {
            let mut ok = true;
            if e.k == 0 || e.k > n {
                issues.push(ValidationIssue::PositionOutOfRange { k: e.k, n });
                ok = false;
            }
            if e.l == 0 || e.l > p {
                issues.push(ValidationIssue::PropertyOutOfRange { property: e.l, p });
                ok = false;
            }
            if !ok {
                continue;
            }
            if seen.insert((e.k, e.l), ()).is_some() {
                issues.push(ValidationIssue::DuplicateBound { kind, k: e.k, property: e.l });
            }
            if kind == BoundKind::Upper && e.value as usize > e.k {
                issues.push(ValidationIssue::UpperAbovePrefix { k: e.k, property: e.l, value: e.value });
            }
            table[(e.k - 1) * p + (e.l - 1)] = e.value;
            if kind == BoundKind::Lower {
                lower_given[(e.k - 1) * p + (e.l - 1)] = true;
            }
        }
    }
    // A lower bound at k applies to every longer prefix as well.
    for k in 2..=n {
        for l in 0..p {
            if !lower_given[(k - 1) * p + l] {
                lo[(k - 1) * p + l] = lo[(k - 2) * p + l];
            }
        }
    }
    for l in 0..p {
        for k in 1..=n {
            let (a, b) = (lo[(k - 1) * p + l], up[(k - 1) * p + l]);
            if a > b {
                issues.push(ValidationIssue::LowerAboveUpper { k, property: l + 1, lower: a, upper: b });
            }
            if k > 1 {
                for (kind, table) in [(BoundKind::Lower, &lo), (BoundKind::Upper, &up)] {
                    let (prev, cur) = (table[(k - 2) * p + l], table[(k - 1) * p + l]);
                    if cur < prev {
                        issues.push(ValidationIssue::NonMonotone { kind, k, property: l + 1, prev, value: cur });
                    }
                }
            }
        }
    }

    let weights = match &source {
        WeightSource::Explicit(w) => {
            if (w.rows(), w.cols()) != (m, n) {
                issues.push(ValidationIssue::WeightShape { expected: (m, n), found: (w.rows(), w.cols()) });
                None
            } else {
                let bad = w.values().iter().position(|v| !v.is_finite() || *v < 0.0);
                if let Some(idx) = bad {
                    issues.push(ValidationIssue::WeightValue {
                        item: idx / n + 1,
                        position: idx % n + 1,
                        value: w.values()[idx],
                    });
                }
                Some(Weights::Dense(w.clone()))
            }
        }
        WeightSource::Metric(spec) => match spec.validate(m, n) {
            Ok(()) => Some(Weights::from_metric(spec, m, n)),
            Err(e) => {
                issues.push(ValidationIssue::Metric(e.to_string()));
                None
            }
        },
    };
    if !issues.is_empty() {
        return Err(Error::Invalid(issues));
    }

    let mut degree = vec![0usize; m + 1];
    for members in &props {
        for &i in members {
            degree[i + 1] += 1;
        }
    }
    for i in 0..m {
        degree[i + 1] += degree[i];
    }
    let member_offsets = degree;
    let mut fill = member_offsets.clone();
    let mut member_props = vec![0u32; member_offsets[m]];
    for (l, members) in props.iter().enumerate() {
        for &i in members {
            member_props[fill[i]] = l as u32;
            fill[i] += 1;
        }
    }

    Ok(Instance {
        m,
        n,
        properties: props,
        lower: lo,
        upper: up,
        source,
        weights: weights.expect("weights validated"),
        member_offsets,
        member_props,
    })
}

/// An injective map from positions to items: `items()[j]` sits at position `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    /// Builds a ranking of 0-based items, checking range and distinctness.
    pub fn new(items: Vec<usize>, m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        for (j, &i) in items.iter().enumerate() {
            if i >= m {
                return Err(Error::Ranking(format!(
                    "position {} holds item {}, outside 1..={m}",
                    j + 1,
                    i + 1
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Ranking(format!("item {} is ranked twice", i + 1)));
            }
        }
        Ok(Ranking(items))
    }

    /// Builds from 1-based item labels.
    pub fn from_one_based(items: &[usize], m: usize) -> Result<Self> {
        if let Some(j) = items.iter().position(|&i| i == 0) {
            return Err(Error::Ranking(format!("position {} holds item 0; items are 1-based", j + 1)));
        }
        Self::new(items.iter().map(|i| i - 1).collect(), m)
    }

    pub(crate) fn from_vec_unchecked(items: Vec<usize>) -> Self {
        Ranking(items)
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_shape(inst: &Instance, r: &Ranking) -> Result<()> {
    if r.len() != inst.n() {
        return Err(Error::Ranking(format!("ranking has {} positions, instance has n={}", r.len(), inst.n())));
    }
    Ranking::new(r.items().to_vec(), inst.m()).map(|_| ())
}

/// Total value `sum_j W[pi(j)][j]`.
pub fn ranking_value(inst: &Instance, r: &Ranking) -> Result<f64> {
    check_shape(inst, r)?;
    Ok(value_unchecked(inst, r.items()))
}

pub(crate) fn value_unchecked(inst: &Instance, items: &[usize]) -> f64 {
    items.iter().enumerate().map(|(j, &i)| inst.weight(i, j)).sum()
}

/// Prefix count and bounds for one `(k, l)` pair; `k` and `l` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintEntry {
    pub k: usize,
    pub l: usize,
    pub count: u32,
    pub lower: u32,
    pub upper: u32,
    /// `upper - count`; negative when violated.
    pub slack: i64,
    /// `max(lower - count, 0)`.
    pub deficit: u32,
    /// `max(count / upper, 1)`; infinite when `upper == 0 < count`.
    pub factor: f64,
}

impl ConstraintEntry {
    pub fn satisfied(&self) -> bool {
        self.slack >= 0 && self.deficit == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub entries: Vec<ConstraintEntry>,
    pub feasible: bool,
    pub max_violation_factor: f64,
}

impl ConstraintReport {
    pub fn get(&self, k: usize, l: usize, p: usize) -> &ConstraintEntry {
        &self.entries[(k - 1) * p + (l - 1)]
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConstraintEntry> {
        self.entries.iter().filter(|e| !e.satisfied())
    }
}

/// Counts every prefix and compares it against both bounds.
pub fn check_constraints(inst: &Instance, r: &Ranking) -> Result<ConstraintReport> {
    check_shape(inst, r)?;
    Ok(constraints_unchecked(inst, r.items()))
}

pub(crate) fn constraints_unchecked(inst: &Instance, items: &[usize]) -> ConstraintReport {
    let p = inst.p();
    let mut counts = vec![0u32; p];
    let mut entries = Vec::with_capacity(items.len() * p);
    let mut feasible = true;
    let mut max_factor = 1.0f64;
    for (j, &i) in items.iter().enumerate() {
        for &l in inst.item_properties(i) {
            counts[l as usize] += 1;
        }
        let k = j + 1;
        for (l, &count) in counts.iter().enumerate() {
            let (lower, upper) = (inst.lower(k, l), inst.upper(k, l));
            let factor = if count <= upper {
                1.0
            } else if upper == 0 {
                f64::INFINITY
            } else {
                count as f64 / upper as f64
            };
            let entry = ConstraintEntry {
                k,
                l: l + 1,
                count,
                lower,
                upper,
                slack: upper as i64 - count as i64,
                deficit: lower.saturating_sub(count),
                factor,
            };
            feasible &= entry.satisfied();
            max_factor = max_factor.max(factor);
            entries.push(entry);
        }
    }
    ConstraintReport { entries, feasible, max_violation_factor: max_factor }
}

/// Distinct property sets ("types") of the items.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeProfile {
    /// Type id of each item.
    pub item_type: Vec<usize>,
    /// Property set of each type, ascending. Types are numbered by first
    /// appearance in item order.
    pub type_props: Vec<Vec<u32>>,
    /// Items of each type, ascending.
    pub classes: Vec<Vec<usize>>,
    pub delta: usize,
    p: usize,
}

impl TypeProfile {
    pub fn q(&self) -> usize {
        self.type_props.len()
    }

    /// Type of item `i` as a 0/1 vector over the `p` properties.
    pub fn type_vector(&self, i: usize) -> Vec<bool> {
        let mut v = vec![false; self.p];
        for &l in &self.type_props[self.item_type[i]] {
            v[l as usize] = true;
        }
        v
    }
}

pub fn type_profile(inst: &Instance) -> TypeProfile {
    let mut ids: std::collections::HashMap<&[u32], usize> = std::collections::HashMap::new();
    let mut item_type = Vec::with_capacity(inst.m());
    let mut type_props = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..inst.m() {
        let props = inst.item_properties(i);
        let id = *ids.entry(props).or_insert_with(|| {
            type_props.push(props.to_vec());
            classes.push(Vec::new());
            type_props.len() - 1
        });
        classes[id].push(i);
        item_type.push(id);
    }
    TypeProfile { item_type, type_props, classes, delta: inst.delta(), p: inst.p() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{MetricKind, MetricSpec};

    fn raw(m: usize, n: usize, properties: Vec<Vec<usize>>) -> RawInstance {
        RawInstance {
            m,
            n,
            properties,
            lower: vec![],
            upper: vec![],
            weights: WeightSource::Explicit(WeightMatrix::zeros(m, n)),
        }
    }

    fn ub(k: usize, l: usize, value: u32) -> BoundEntry {
        BoundEntry { k, l, value }
    }

    #[test]
    fn disjoint_properties_profile() {
        let mut r = raw(4, 3, vec![vec![1, 3], vec![2, 4]]);
        r.upper = (1..=3).map(|k| ub(k, 1, 1)).collect();
        let inst = Instance::new(r).unwrap();
        let prof = type_profile(&inst);
        assert_eq!(prof.delta, 1);
        assert_eq!(prof.q(), 2);
        assert_eq!(prof.classes, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(prof.type_vector(2), vec![true, false]);
    }

    #[test]
    fn overlapping_profile() {
        let inst = Instance::new(raw(3, 2, vec![vec![1, 2], vec![2, 3]])).unwrap();
        let prof = type_profile(&inst);
        assert_eq!(prof.delta, 2);
        assert_eq!(prof.q(), 3);
        assert_eq!(inst.max_degree(), (2, 1));
    }

    #[test]
    fn no_properties_profile() {
        let inst = Instance::new(raw(5, 2, vec![])).unwrap();
        let prof = type_profile(&inst);
        assert_eq!((prof.delta, prof.q()), (0, 1));
        assert_eq!(prof.classes[0], vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn defaults_fill_in() {
        let mut r = raw(4, 4, vec![vec![1, 2]]);
        r.upper = vec![ub(2, 1, 1)];
        let inst = Instance::new(r).unwrap();
        assert_eq!(
            (1..=4).map(|k| inst.upper(k, 0)).collect::<Vec<_>>(),
            vec![1, 1, 3, 4]
        );
        assert!((1..=4).all(|k| inst.lower(k, 0) == 0));
    }

    #[test]
    fn rejects_bad_shapes() {
        let err = Instance::new(raw(3, 5, vec![])).unwrap_err();
        assert!(err.to_string().contains("n ≤ m violated"), "{err}");

        let err = Instance::new(raw(3, 2, vec![vec![4]])).unwrap_err();
        assert!(matches!(err, Error::Invalid(ref v) if matches!(v[0], ValidationIssue::ItemOutOfRange { .. })));

        let mut r = raw(3, 2, vec![vec![1]]);
        r.upper = vec![ub(1, 1, 2)];
        assert!(Instance::new(r).is_err());

        let mut r = raw(3, 2, vec![vec![1]]);
        r.lower = vec![ub(1, 1, 1)];
        r.upper = vec![ub(1, 1, 0)];
        assert!(Instance::new(r).is_err());

        let mut r = raw(3, 2, vec![vec![1]]);
        r.weights = WeightSource::Explicit(WeightMatrix::zeros(2, 2));
        assert!(Instance::new(r).is_err());
    }

    #[test]
    fn rejects_non_monotone_bounds() {
        let mut r = raw(4, 3, vec![vec![1, 2]]);
        r.upper = vec![ub(1, 1, 1), ub(2, 1, 0)];
        let err = Instance::new(r).unwrap_err();
        assert!(err.to_string().contains("decrease"), "{err}");

        let mut r = raw(4, 3, vec![vec![1, 2]]);
        r.lower = vec![ub(1, 1, 1), ub(2, 1, 0)];
        assert!(Instance::new(r).is_err());
    }

    #[test]
    fn lower_bounds_carry_forward() {
        let mut r = raw(4, 4, vec![vec![1, 2]]);
        r.lower = vec![ub(2, 1, 1)];
        let inst = Instance::new(r).unwrap();
        assert_eq!((1..=4).map(|k| inst.lower(k, 0)).collect::<Vec<_>>(), vec![0, 1, 1, 1]);
        assert_eq!(inst.to_raw().lower, vec![ub(2, 1, 1)]);
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut r = raw(4, 4, vec![vec![2, 1], vec![3]]);
        r.upper = vec![ub(2, 1, 1), ub(3, 1, 3), ub(2, 2, 1), ub(1, 2, 1)];
        r.lower = vec![ub(4, 2, 1)];
        let inst = Instance::new(r).unwrap();
        let again = Instance::new(inst.to_raw()).unwrap();
        assert_eq!(inst, again);
        assert_eq!(inst.to_raw(), again.to_raw());
    }

    #[test]
    fn product_value() {
        let w = WeightMatrix::from_fn(4, 4, |i, j| ((4 - i) * (4 - j)) as f64);
        let mut r = raw(4, 4, vec![vec![1, 2]]);
        r.weights = WeightSource::Explicit(w);
        let inst = Instance::new(r).unwrap();
        let pi = Ranking::from_one_based(&[1, 3, 2, 4], 4).unwrap();
        assert_eq!(ranking_value(&inst, &pi).unwrap(), 29.0);
    }

    #[test]
    fn dcg_value() {
        let mut r = raw(4, 3, vec![]);
        r.weights = WeightSource::Metric(MetricSpec::new(MetricKind::Dcg, vec![4.0, 3.0, 2.0, 1.0]));
        let inst = Instance::new(r).unwrap();
        let pi = Ranking::from_one_based(&[1, 2, 4], 4).unwrap();
        let expect = 4.0 + 3.0 / 3f64.log2() + 1.0 / 4f64.log2();
        assert!((ranking_value(&inst, &pi).unwrap() - expect).abs() < 1e-9);
        assert!((expect - 6.3928).abs() < 1e-4);
    }

    #[test]
    fn ranking_errors() {
        assert!(Ranking::new(vec![0, 0], 3).is_err());
        assert!(Ranking::new(vec![3], 3).is_err());
        assert!(Ranking::from_one_based(&[0], 3).is_err());
        let inst = Instance::new(raw(3, 2, vec![])).unwrap();
        let short = Ranking::new(vec![0], 3).unwrap();
        assert!(ranking_value(&inst, &short).is_err());
    }

    #[test]
    fn single_cap_violation() {
        let mut r = raw(4, 4, vec![vec![1, 2]]);
        r.upper = vec![ub(2, 1, 1)];
        let inst = Instance::new(r).unwrap();
        let rep = check_constraints(&inst, &Ranking::new(vec![0, 1, 2, 3], 4).unwrap()).unwrap();
        assert!(!rep.feasible);
        let e = rep.get(2, 1, 1);
        assert_eq!((e.count, e.upper, e.factor), (2, 1, 2.0));
        assert_eq!(rep.max_violation_factor, 2.0);
    }

    #[test]
    fn small_feasible_report() {
        let mut r = raw(4, 3, vec![vec![1, 3], vec![2, 4]]);
        r.upper = (1..=3).map(|k| ub(k, 1, 1)).collect();
        let inst = Instance::new(r).unwrap();
        let rep = check_constraints(&inst, &Ranking::from_one_based(&[1, 2, 4], 4).unwrap()).unwrap();
        assert!(rep.feasible);
        assert_eq!((1..=3).map(|k| rep.get(k, 1, 2).count).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(rep.violations().count(), 0);
    }

    #[test]
    fn zero_upper_with_count_is_infinite() {
        let mut r = raw(3, 2, vec![vec![1]]);
        r.upper = vec![ub(1, 1, 0), ub(2, 1, 0)];
        let inst = Instance::new(r).unwrap();
        let rep = check_constraints(&inst, &Ranking::new(vec![0, 1], 3).unwrap()).unwrap();
        assert!(rep.max_violation_factor.is_infinite());
    }
}
