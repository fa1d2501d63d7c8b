//! Seeded instance generators.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so a parameter set always produces the same instance on
//! every platform.
//!
//! Bound tightness: for `theta < 1` the upper bound of property `l` at
//! prefix `k` is `min(k, ceil(theta * k * |P_l| / m))`, i.e. `theta` times
//! the proportional share. Lower bounds are
//! `floor(lower_rate * k * |P_l| / m)`. Only non-default entries are stored.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{MetricKind, MetricSpec, WeightMatrix};
use crate::model::{BoundEntry, Instance, RawInstance, WeightSource};

/// Where the value matrix of a generated instance comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GenMetric {
    /// One of the metric kinds, fed with sampled qualities.
    Metric { metric: MetricKind },
    /// Explicit integer matrix `sum_r a_r[i] * b_r[j]` with each `a_r`,
    /// `b_r` drawn from `0..=max` and sorted non-increasing.
    RandomMonge { terms: usize, max: u32 },
}

/// Distribution of item qualities (sorted non-increasing after sampling).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum QualityDist {
    Uniform { lo: f64, hi: f64 },
    Integers { lo: u32, hi: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenParams {
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub p: usize,
    /// Largest number of properties of any item; reached by at least one.
    #[serde(default)]
    pub delta: usize,
    #[serde(default = "default_metric")]
    pub metric: GenMetric,
    #[serde(default = "default_qualities")]
    pub qualities: QualityDist,
    #[serde(default = "one")]
    pub theta: f64,
    #[serde(default)]
    pub lower_rate: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_metric() -> GenMetric {
    GenMetric::Metric { metric: MetricKind::Dcg }
}

fn default_qualities() -> QualityDist {
    QualityDist::Uniform { lo: 1.0, hi: 10.0 }
}

fn one() -> f64 {
    1.0
}

impl GenParams {
    pub fn new(m: usize, n: usize, p: usize, delta: usize, seed: u64) -> Self {
        GenParams {
            m,
            n,
            p,
            delta,
            metric: default_metric(),
            qualities: default_qualities(),
            theta: 1.0,
            lower_rate: 0.0,
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Params(msg));
        if self.m == 0 || self.n == 0 || self.n > self.m {
            return bad(format!("need 1 <= n <= m (m={}, n={})", self.m, self.n));
        }
        if self.delta > self.p {
            return bad(format!("delta={} exceeds p={}", self.delta, self.p));
        }
        if self.p > 0 && self.delta == 0 {
            return bad("delta=0 leaves every property empty".into());
        }
        if self.p > self.m * self.delta.max(1) {
            return bad(format!("{} properties cannot all be nonempty with m={}, delta={}", self.p, self.m, self.delta));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return bad(format!("theta={} outside (0, 1]", self.theta));
        }
        if !(0.0..=1.0).contains(&self.lower_rate) {
            return bad(format!("lower_rate={} outside [0, 1]", self.lower_rate));
        }
        match self.qualities {
            QualityDist::Uniform { lo, hi } if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) => {
                bad(format!("uniform qualities need 0 <= lo <= hi (lo={lo}, hi={hi})"))
            }
            QualityDist::Integers { lo, hi } if lo > hi => bad(format!("integer qualities need lo <= hi ({lo} > {hi})")),
            _ => Ok(()),
        }
    }
}

/// Random instance from `params`; the same params give the same instance.
pub fn gen_random(params: &GenParams) -> Result<Instance> {
    params.check()?;
    let GenParams { m, n, p, delta, .. } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    // property memberships
    let mut types: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let size = rng.gen_range(0..=delta);
            sample(&mut rng, p, size).into_vec()
        })
        .collect();
    if delta > 0 {
        let i = rng.gen_range(0..m);
        types[i] = sample(&mut rng, p, delta).into_vec();
    }
    let mut members = vec![0usize; p];
    for t in &types {
        t.iter().for_each(|&l| members[l] += 1);
    }
    for l in 0..p {
        if members[l] > 0 {
            continue;
        }
        let open: Vec<usize> = (0..m).filter(|&i| types[i].len() < delta).collect();
        if !open.is_empty() {
            types[open[rng.gen_range(0..open.len())]].push(l);
        } else {
            // every item is full: take a membership from a shared property
            let donors: Vec<(usize, usize)> = (0..m)
                .flat_map(|i| types[i].iter().enumerate().map(move |(s, &x)| (i, s, x)))
                .filter(|&(_, _, x)| members[x] >= 2)
                .map(|(i, s, _)| (i, s))
                .collect();
            let (i, s) = donors[rng.gen_range(0..donors.len())];
            members[types[i][s]] -= 1;
            types[i][s] = l;
        }
        members[l] = 1;
    }
    let mut properties = vec![Vec::new(); p];
    for (i, t) in types.iter().enumerate() {
        t.iter().for_each(|&l| properties[l].push(i + 1));
    }

    let weights = match params.metric {
        GenMetric::Metric { metric } => {
            let mut a: Vec<f64> = (0..m)
                .map(|_| match params.qualities {
                    QualityDist::Uniform { lo, hi } if lo < hi => rng.gen_range(lo..hi),
                    QualityDist::Uniform { lo, .. } => lo,
                    QualityDist::Integers { lo, hi } => rng.gen_range(lo..=hi) as f64,
                })
                .collect();
            a.sort_by(|x, y| y.total_cmp(x));
            let spec = if metric == MetricKind::Rank1 {
                let mut f: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
                f.sort_by(|x, y| y.total_cmp(x));
                MetricSpec::rank1(a, f)
            } else {
                MetricSpec::new(metric, a)
            };
            WeightSource::Metric(spec)
        }
        GenMetric::RandomMonge { terms, max } => {
            let mut w = WeightMatrix::zeros(m, n);
            for _ in 0..terms {
                let mut a: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=max)).collect();
                let mut b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
                a.sort_unstable_by(|x, y| y.cmp(x));
                b.sort_unstable_by(|x, y| y.cmp(x));
                for (i, &ai) in a.iter().enumerate() {
                    for (j, &bj) in b.iter().enumerate() {
                        w.set(i, j, w.get(i, j) + f64::from(ai) * f64::from(bj));
                    }
                }
            }
            WeightSource::Explicit(w)
        }
    };

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for k in 1..=n {
        for (l, members) in properties.iter().enumerate() {
            let share = k as f64 * members.len() as f64 / m as f64;
            let up = if params.theta < 1.0 { ((params.theta * share).ceil() as usize).min(k) } else { k };
            let lo = (params.lower_rate * share).floor() as usize;
            if lo > up {
                return Err(Error::Params(format!(
                    "lower bound {lo} exceeds upper bound {up} at k={k}, property {}; lower theta or raise lower_rate",
                    l + 1
                )));
            }
            if up < k {
                upper.push(BoundEntry { k, l: l + 1, value: up as u32 });
            }
            if lo > 0 {
                lower.push(BoundEntry { k, l: l + 1, value: lo as u32 });
            }
        }
    }

    Instance::new(RawInstance { m, n, properties, lower, upper, weights })
}

/// Instance whose feasibility is the existence of an `n`-matching.
///
/// Each hyperedge (a set of 0-based vertex ids) becomes an item, each
/// vertex that lies on some edge becomes a property bounded by 1 at every
/// prefix. Vertices on no edge are dropped. Weights are DCG with qualities
/// `m, m-1, ..., 1`.
pub fn gen_from_hypergraph(vertices: usize, hyperedges: &[Vec<usize>], n: usize) -> Result<Instance> {
    let m = hyperedges.len();
    if let Some(v) = hyperedges.iter().flatten().find(|&&v| v >= vertices) {
        return Err(Error::Params(format!("vertex {v} out of range for {vertices} vertices")));
    }
    let mut incident = vec![Vec::new(); vertices];
    for (e, edge) in hyperedges.iter().enumerate() {
        for &v in edge {
            if incident[v].last() != Some(&(e + 1)) {
                incident[v].push(e + 1);
            }
        }
    }
    let properties: Vec<Vec<usize>> = incident.into_iter().filter(|s| !s.is_empty()).collect();
    let upper = (1..=n)
        .flat_map(|k| (1..=properties.len()).map(move |l| BoundEntry { k, l, value: 1 }))
        .collect();
    let qualities = (0..m).map(|i| (m - i) as f64).collect();
    Instance::new(RawInstance {
        m,
        n,
        properties,
        lower: vec![],
        upper,
        weights: WeightSource::Metric(MetricSpec::new(MetricKind::Dcg, qualities)),
    })
}

/// The `m = n = 4` instance with one property `{1, 2}` and `U_{2,1} = 1`,
/// weighted by `(5 - i)(5 - j)` (1-based). Its optimum is 29.
pub fn gen_fractional_vertex() -> Instance {
    let w = WeightMatrix::from_fn(4, 4, |i, j| ((4 - i) * (4 - j)) as f64);
    gen_fractional_vertex_with(WeightSource::Explicit(w)).expect("fixed fixture is valid")
}

/// The same constraints with caller-chosen weights.
pub fn gen_fractional_vertex_with(weights: WeightSource) -> Result<Instance> {
    Instance::new(RawInstance {
        m: 4,
        n: 4,
        properties: vec![vec![1, 2]],
        lower: vec![],
        upper: vec![BoundEntry { k: 2, l: 1, value: 1 }],
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::feasibility_exact;
    use crate::oracle::brute_force_solve;

    #[test]
    fn same_seed_same_instance() {
        let mut params = GenParams::new(7, 4, 3, 2, 11);
        params.theta = 0.6;
        params.lower_rate = 0.3;
        assert_eq!(gen_random(&params).unwrap(), gen_random(&params).unwrap());
        params.seed = 12;
        let other = gen_random(&params).unwrap();
        params.seed = 11;
        assert_ne!(gen_random(&params).unwrap(), other);
    }

    #[test]
    fn delta_is_reached_and_properties_nonempty() {
        for seed in 0..200 {
            let inst = gen_random(&GenParams::new(6, 3, 4, 2, seed)).unwrap();
            assert_eq!(inst.delta(), 2);
            assert!(inst.properties().iter().all(|s| !s.is_empty()));
        }
        // every item must carry delta properties to cover p = m * delta
        let inst = gen_random(&GenParams::new(3, 2, 3, 1, 5)).unwrap();
        assert!(inst.properties().iter().all(|s| s.len() == 1));
    }

    #[test]
    fn vacuous_bounds_at_theta_one() {
        let inst = gen_random(&GenParams::new(7, 4, 2, 1, 1)).unwrap();
        let raw = inst.to_raw();
        assert!(raw.lower.is_empty() && raw.upper.is_empty());
    }

    #[test]
    fn parameter_errors() {
        assert!(gen_random(&GenParams::new(5, 3, 2, 3, 0)).is_err());
        assert!(gen_random(&GenParams::new(3, 4, 0, 0, 0)).is_err());
        let mut p = GenParams::new(7, 5, 1, 1, 0);
        p.theta = 0.1;
        p.lower_rate = 1.0;
        let err = gen_random(&p).unwrap_err();
        assert!(matches!(err, Error::Params(_)), "{err}");
    }

    #[test]
    fn random_monge_is_integral() {
        let mut p = GenParams::new(6, 4, 2, 1, 3);
        p.metric = GenMetric::RandomMonge { terms: 3, max: 5 };
        let inst = gen_random(&p).unwrap();
        assert!(inst.monge().holds());
        assert!(inst.weight_matrix().values().iter().all(|w| w.fract() == 0.0));
    }

    #[test]
    fn hypergraph_examples() {
        let triangle = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert!(!feasibility_exact(&gen_from_hypergraph(3, &triangle, 2).unwrap()).unwrap().is_feasible());
        let disjoint = vec![vec![0, 1], vec![2, 3]];
        assert!(feasibility_exact(&gen_from_hypergraph(4, &disjoint, 2).unwrap()).unwrap().is_feasible());
        // isolated vertex 5 is dropped
        let inst = gen_from_hypergraph(6, &disjoint, 1).unwrap();
        assert_eq!(inst.p(), 4);
        assert!(gen_from_hypergraph(2, &disjoint, 1).is_err());
    }

    #[test]
    fn fractional_vertex_fixture() {
        let inst = gen_fractional_vertex();
        assert_eq!(inst.properties(), &[vec![0, 1]]);
        assert_eq!(inst.upper(1, 0), 1);
        assert_eq!(inst.upper(3, 0), 3);
        assert_eq!(brute_force_solve(&inst).unwrap().value, 29.0);
        let zero = gen_fractional_vertex_with(WeightSource::Explicit(WeightMatrix::zeros(4, 4))).unwrap();
        assert_eq!(brute_force_solve(&zero).unwrap().value, 0.0);
    }
}
