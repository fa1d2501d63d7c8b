//! Reference implementations shared by the integration tests. Everything
//! here recomputes from the raw instance description and does not call the
//! library's solvers or constraint checker.
#![allow(dead_code, clippy::needless_range_loop)]

use fairrank::generators::{GenMetric, QualityDist};
use fairrank::{gen_random, GenParams, Instance, MetricKind, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prefix bounds recomputed from `to_raw`, with the documented defaults:
/// `U = k`, unspecified `L` repeats the previous prefix's bound.
pub struct Bounds {
    pub lower: Vec<Vec<u32>>,
    pub upper: Vec<Vec<u32>>,
    /// Property sets of each item, 0-based.
    pub types: Vec<Vec<usize>>,
}

pub fn bounds(inst: &Instance) -> Bounds {
    let raw = inst.to_raw();
    let (n, p) = (raw.n, raw.properties.len());
    let mut upper: Vec<Vec<u32>> = (1..=n).map(|k| vec![k as u32; p]).collect();
    let mut lower: Vec<Vec<Option<u32>>> = vec![vec![None; p]; n];
    for b in &raw.upper {
        upper[b.k - 1][b.l - 1] = b.value;
    }
    for b in &raw.lower {
        lower[b.k - 1][b.l - 1] = Some(b.value);
    }
    let mut filled = vec![vec![0u32; p]; n];
    for k in 0..n {
        for l in 0..p {
            filled[k][l] = lower[k][l].unwrap_or(if k == 0 { 0 } else { filled[k - 1][l] });
        }
    }
    let mut types = vec![Vec::new(); raw.m];
    for (l, members) in raw.properties.iter().enumerate() {
        for &i in members {
            types[i - 1].push(l);
        }
    }
    Bounds { lower: filled, upper, types }
}

pub fn satisfies(b: &Bounds, items: &[usize]) -> bool {
    let p = b.upper.first().map_or(0, Vec::len);
    let mut counts = vec![0u32; p];
    for (j, &i) in items.iter().enumerate() {
        for &l in &b.types[i] {
            counts[l] += 1;
        }
        for l in 0..p {
            if counts[l] < b.lower[j][l] || counts[l] > b.upper[j][l] {
                return false;
            }
        }
    }
    true
}

/// Largest violation factor `count / U` over all prefixes (1 if none).
pub fn violation_factor(b: &Bounds, items: &[usize]) -> f64 {
    let p = b.upper.first().map_or(0, Vec::len);
    let mut counts = vec![0u32; p];
    let mut worst = 1.0f64;
    for (j, &i) in items.iter().enumerate() {
        for &l in &b.types[i] {
            counts[l] += 1;
        }
        for l in 0..p {
            let (c, u) = (counts[l], b.upper[j][l]);
            if c > u {
                worst = worst.max(if u == 0 { f64::INFINITY } else { c as f64 / u as f64 });
            }
        }
    }
    worst
}

pub fn value(w: &WeightMatrix, items: &[usize]) -> f64 {
    items.iter().enumerate().map(|(j, &i)| w.get(i, j)).sum()
}

/// Exhaustive optimum over every injective assignment, no pruning.
/// Returns `(best value, feasible count)`; value is `None` if infeasible.
pub fn reference_optimum(inst: &Instance) -> (Option<f64>, u64) {
    let b = bounds(inst);
    let w = inst.weight_matrix();
    let (m, n) = (inst.m(), inst.n());
    let mut best: Option<f64> = None;
    let mut count = 0u64;
    let mut used = vec![false; m];
    let mut items = Vec::with_capacity(n);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        m: usize,
        n: usize,
        b: &Bounds,
        w: &WeightMatrix,
        used: &mut [bool],
        items: &mut Vec<usize>,
        best: &mut Option<f64>,
        count: &mut u64,
    ) {
        if items.len() == n {
            if satisfies(b, items) {
                *count += 1;
                let v = value(w, items);
                if best.is_none_or(|x| v > x) {
                    *best = Some(v);
                }
            }
            return;
        }
        for i in 0..m {
            if !used[i] {
                used[i] = true;
                items.push(i);
                rec(m, n, b, w, used, items, best, count);
                items.pop();
                used[i] = false;
            }
        }
    }
    rec(m, n, &b, &w, &mut used, &mut items, &mut best, &mut count);
    (best, count)
}

/// Full quadruple enumeration of the monotone Monge condition, exact.
pub fn monge_by_quadruples(w: &WeightMatrix) -> bool {
    let (m, n) = (w.rows(), w.cols());
    for i in 0..m {
        for j in 0..n {
            if i + 1 < m && w.get(i + 1, j) > w.get(i, j) {
                return false;
            }
            if j + 1 < n && w.get(i, j + 1) > w.get(i, j) {
                return false;
            }
        }
    }
    for i1 in 0..m {
        for i2 in i1 + 1..m {
            for j1 in 0..n {
                for j2 in j1 + 1..n {
                    if w.get(i1, j1) + w.get(i2, j2) < w.get(i1, j2) + w.get(i2, j1) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Whether some `n` hyperedges are pairwise disjoint.
pub fn has_matching(edges: &[Vec<usize>], n: usize) -> bool {
    fn rec(edges: &[Vec<usize>], start: usize, need: usize, taken: &mut Vec<usize>) -> bool {
        if need == 0 {
            return true;
        }
        for e in start..edges.len() {
            if edges[e].iter().all(|v| !taken.contains(v)) {
                let before = taken.len();
                taken.extend(&edges[e]);
                if rec(edges, e + 1, need - 1, taken) {
                    return true;
                }
                taken.truncate(before);
            }
        }
        false
    }
    rec(edges, 0, n, &mut Vec::new())
}

fn pick_metric(rng: &mut ChaCha8Rng) -> (GenMetric, QualityDist) {
    let metric = match rng.gen_range(0..6) {
        0 => GenMetric::Metric { metric: MetricKind::Dcg },
        1 => GenMetric::Metric { metric: MetricKind::Rank1 },
        2 => GenMetric::Metric { metric: MetricKind::BradleyTerry },
        3 => GenMetric::Metric { metric: MetricKind::Footrule },
        4 => GenMetric::Metric { metric: MetricKind::Rho },
        _ => GenMetric::RandomMonge { terms: rng.gen_range(1..4), max: rng.gen_range(1..6) },
    };
    // small integer qualities create ties on purpose
    let qualities = if rng.gen_bool(0.5) {
        QualityDist::Integers { lo: 1, hi: rng.gen_range(1..6) }
    } else {
        QualityDist::Uniform { lo: 1.0, hi: 10.0 }
    };
    (metric, qualities)
}

/// Random parameters for case number `case` of a suite.
///
/// `delta`: allowed range of the delta target; `lower`: allow lower bounds.
pub fn params(case: u64, m_max: usize, n_max: usize, p_max: usize, delta: (usize, usize), lower: bool) -> GenParams {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ case.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let m = rng.gen_range(2..=m_max);
    let n = rng.gen_range(1..=n_max.min(m));
    let d = rng.gen_range(delta.0..=delta.1);
    let p = if d == 0 { 0 } else { rng.gen_range(d..=p_max.max(d)).min(m * d) };
    let (metric, qualities) = pick_metric(&mut rng);
    let theta = if rng.gen_bool(0.2) { 1.0 } else { rng.gen_range(0.2..1.0) };
    let lower_rate = if lower && rng.gen_bool(0.7) { rng.gen_range(0.0..=theta) } else { 0.0 };
    GenParams { m, n, p, delta: d, metric, qualities, theta, lower_rate, seed: case }
}

pub fn instance(params: &GenParams) -> Instance {
    gen_random(params).unwrap_or_else(|e| panic!("{params:?}: {e}"))
}

/// Adds lower bounds drawn below the prefix counts of a random ranking, kept
/// monotone and under the upper bounds. The ranking itself may still break
/// an upper bound, so the result can be infeasible.
pub fn with_random_lower(inst: &Instance, seed: u64) -> Instance {
    use fairrank::{BoundEntry, RawInstance};
    use rand::seq::SliceRandom;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bounds(inst);
    let (m, n, p) = (inst.m(), inst.n(), inst.p());
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let mut raw: RawInstance = inst.to_raw();
    raw.lower.clear();
    let mut counts = vec![0u32; p];
    let mut running = vec![0u32; p];
    for k in 1..=n {
        for &l in &b.types[order[k - 1]] {
            counts[l] += 1;
        }
        for l in 0..p {
            let draw = rng.gen_range(0..=counts[l]);
            running[l] = running[l].max(draw).min(b.upper[k - 1][l]);
            if running[l] > 0 {
                raw.lower.push(BoundEntry { k, l: l + 1, value: running[l] });
            }
        }
    }
    Instance::new(raw).unwrap_or_else(|e| panic!("planted lower bounds rejected: {e}"))
}
