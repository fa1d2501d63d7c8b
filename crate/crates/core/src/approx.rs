//! Two-phase approximation for overlapping properties with upper bounds.
//!
//! Phase one scans all cells `(item, position)` by non-increasing weight and
//! keeps a cell whenever its row and column are free and every prefix bound
//! still holds. The result is a partial ranking worth at least `1/(delta+2)`
//! of the optimum. Phase two fills the empty positions in increasing order
//! from the unused items, checking bounds against the newly placed items
//! alone; both layers respect the bounds separately, so the final ranking
//! exceeds any bound by at most a factor of two. Phase two cannot get stuck
//! when the abundance condition holds. Weights need not be Monge.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::abundance_check;
use crate::model::{constraints_unchecked, value_unchecked, Instance, Ranking};

/// Prefix counters `count[l][k-1]` of one layer of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixCounters {
    n: usize,
    counts: Vec<u32>,
}

impl PrefixCounters {
    fn new(p: usize, n: usize) -> Self {
        PrefixCounters { n, counts: vec![0; p * n] }
    }

    /// Number of property-`l` items among the top `k`.
    pub fn get(&self, l: usize, k: usize) -> u32 {
        self.counts[l * self.n + k - 1]
    }

    fn admits(&self, inst: &Instance, item: usize, j: usize) -> bool {
        inst.item_properties(item).iter().all(|&l| {
            let row = &self.counts[l as usize * self.n..(l as usize + 1) * self.n];
            (j..self.n).all(|kk| row[kk] < inst.upper(kk + 1, l as usize))
        })
    }

    fn add(&mut self, inst: &Instance, item: usize, j: usize) {
        for &l in inst.item_properties(item) {
            let row = &mut self.counts[l as usize * self.n..(l as usize + 1) * self.n];
            row[j..].iter_mut().for_each(|c| *c += 1);
        }
    }
}

/// Phase-one result: a set of cells, at most one per row and column.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialAssignment {
    /// `(item, position)` cells in the order they were admitted.
    pub cells: Vec<(usize, usize)>,
    pub counters: PrefixCounters,
    /// Items left unused.
    pub free_items: Vec<usize>,
    /// Positions left empty, ascending.
    pub free_positions: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellOrder {
    /// Comparison sort of all cells.
    Comparison,
    /// Counting sort, used when every weight is a small non-negative integer.
    Bucket,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationEntry {
    pub k: usize,
    pub l: usize,
    pub count: u32,
    pub bound: u32,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport {
    pub ranking: Ranking,
    pub value: f64,
    /// `delta + 2`: the value is at least the optimum divided by this.
    pub guarantee: usize,
    /// Prefix bounds exceeded by the final ranking (each by at most 2x).
    pub violations: Vec<ViolationEntry>,
    pub max_violation_factor: f64,
    /// `(position, item)` pairs placed by phase two, in order.
    pub fill_order: Vec<(usize, usize)>,
    pub phase_one: PartialAssignment,
    pub cell_order: CellOrder,
    /// Set when the abundance condition fails, so phase two may stall.
    pub warning: Option<String>,
}

/// All cells by non-increasing weight; ties by smaller item, then position.
pub fn sorted_cells(inst: &Instance) -> (Vec<(usize, usize)>, CellOrder) {
    let (m, n) = (inst.m(), inst.n());
    let cells = m * n;
    let mut max = 0.0f64;
    let integral = (0..m).all(|i| {
        (0..n).all(|j| {
            let w = inst.weight(i, j);
            max = max.max(w);
            w.fract() == 0.0
        })
    });
    if integral && max <= (4 * cells) as f64 {
        let top = max as usize;
        let mut buckets = vec![0usize; top + 2];
        for i in 0..m {
            for j in 0..n {
                buckets[top - inst.weight(i, j) as usize + 1] += 1;
            }
        }
        for b in 1..buckets.len() {
            buckets[b] += buckets[b - 1];
        }
        let mut out = vec![(0, 0); cells];
        // row-major scan keeps (item, position) order inside a bucket
        for i in 0..m {
            for j in 0..n {
                let b = top - inst.weight(i, j) as usize;
                out[buckets[b]] = (i, j);
                buckets[b] += 1;
            }
        }
        return (out, CellOrder::Bucket);
    }
    let mut out: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    out.sort_by(|&(i1, j1), &(i2, j2)| {
        inst.weight(i2, j2)
            .total_cmp(&inst.weight(i1, j1))
            .then(i1.cmp(&i2))
            .then(j1.cmp(&j2))
    });
    (out, CellOrder::Comparison)
}

/// Greedy maximal partial assignment respecting every bound exactly.
pub fn phase_one(inst: &Instance, order: &[(usize, usize)]) -> PartialAssignment {
    let (m, n) = (inst.m(), inst.n());
    let mut row_used = vec![false; m];
    let mut col_used = vec![false; n];
    let mut counters = PrefixCounters::new(inst.p(), n);
    let mut cells = Vec::new();
    for &(i, j) in order {
        if cells.len() == n {
            break;
        }
        if row_used[i] || col_used[j] || !counters.admits(inst, i, j) {
            continue;
        }
        row_used[i] = true;
        col_used[j] = true;
        counters.add(inst, i, j);
        cells.push((i, j));
    }
    PartialAssignment {
        cells,
        counters,
        free_items: (0..m).filter(|&i| !row_used[i]).collect(),
        free_positions: (0..n).filter(|&j| !col_used[j]).collect(),
    }
}

/// True when no further cell can join `partial` without breaking a row,
/// column or prefix bound.
pub fn is_maximal(inst: &Instance, partial: &PartialAssignment) -> bool {
    partial.free_items.iter().all(|&i| {
        partial
            .free_positions
            .iter()
            .all(|&j| !partial.counters.admits(inst, i, j))
    })
}

pub fn solve_approx(inst: &Instance) -> Result<ApproxReport> {
    inst.require_no_lower()?;
    let n = inst.n();
    let abundance = abundance_check(inst);
    let warning = (!abundance.satisfied).then(|| {
        format!(
            "abundance condition fails (min count {} < n = {n}); gap filling may stall",
            abundance.min_count()
        )
    });

    let (order, cell_order) = sorted_cells(inst);
    let partial = phase_one(inst, &order);

    let mut slots: Vec<Option<usize>> = vec![None; n];
    for &(i, j) in &partial.cells {
        slots[j] = Some(i);
    }
    let mut available = vec![false; inst.m()];
    for &i in &partial.free_items {
        available[i] = true;
    }
    let mut fill = PrefixCounters::new(inst.p(), n);
    let mut fill_order = Vec::new();
    for &j in &partial.free_positions {
        let pick = partial
            .free_items
            .iter()
            .copied()
            .find(|&i| available[i] && fill.admits(inst, i, j));
        let Some(i) = pick else {
            return Err(Error::DeadEnd { position: j + 1 });
        };
        available[i] = false;
        fill.add(inst, i, j);
        slots[j] = Some(i);
        fill_order.push((j, i));
    }

    let items: Vec<usize> = slots.into_iter().map(|s| s.expect("every position filled")).collect();
    let report = constraints_unchecked(inst, &items);
    let violations = report
        .entries
        .iter()
        .filter(|e| e.count > e.upper)
        .map(|e| ViolationEntry { k: e.k, l: e.l, count: e.count, bound: e.upper, factor: e.factor })
        .collect();
    Ok(ApproxReport {
        value: value_unchecked(inst, &items),
        ranking: Ranking::from_vec_unchecked(items),
        guarantee: inst.delta() + 2,
        violations,
        max_violation_factor: report.max_violation_factor,
        fill_order,
        phase_one: partial,
        cell_order,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{MetricSpec, WeightMatrix};
    use crate::model::{BoundEntry, RawInstance, WeightSource};
    use crate::oracle::brute_force_solve;

    #[test]
    fn unconstrained_is_identity() {
        let w = WeightMatrix::from_fn(5, 3, |i, j| ((5 - i) * (3 - j)) as f64 + 0.5);
        let inst = Instance::new(RawInstance {
            m: 5,
            n: 3,
            properties: vec![],
            lower: vec![],
            upper: vec![],
            weights: WeightSource::Explicit(w),
        })
        .unwrap();
        let rep = solve_approx(&inst).unwrap();
        assert_eq!(rep.ranking.items(), &[0, 1, 2]);
        assert!(rep.fill_order.is_empty());
        assert_eq!(rep.cell_order, CellOrder::Comparison);
        assert_eq!(rep.value, brute_force_solve(&inst).unwrap().value);
    }

    #[test]
    fn overlapping_rank1() {
        let a = vec![9.0, 8.0, 7.0, 3.0, 2.0, 1.0];
        let f = vec![1.0, 1.0 / 3f64.log2(), 0.5];
        let inst = Instance::new(RawInstance {
            m: 6,
            n: 3,
            properties: vec![vec![1, 2], vec![1, 3]],
            lower: vec![],
            upper: (1..=3)
                .flat_map(|k| [BoundEntry { k, l: 1, value: 1 }, BoundEntry { k, l: 2, value: 1 }])
                .collect(),
            weights: WeightSource::Metric(MetricSpec::rank1(a, f)),
        })
        .unwrap();
        let rep = solve_approx(&inst).unwrap();
        let opt = brute_force_solve(&inst).unwrap().value;
        assert_eq!(rep.guarantee, 4);
        assert!(4.0 * rep.value >= opt - 1e-9);
        assert!(rep.max_violation_factor <= 2.0);
        assert!(is_maximal(&inst, &rep.phase_one));
    }

    #[test]
    fn bucket_order_matches_comparison() {
        let w = WeightMatrix::from_fn(4, 3, |i, j| ((4 - i) * (3 - j)) as f64);
        let inst = Instance::new(RawInstance {
            m: 4,
            n: 3,
            properties: vec![],
            lower: vec![],
            upper: vec![],
            weights: WeightSource::Explicit(w),
        })
        .unwrap();
        let (bucket, kind) = sorted_cells(&inst);
        assert_eq!(kind, CellOrder::Bucket);
        let mut cmp: Vec<(usize, usize)> = (0..4).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
        cmp.sort_by(|&(a, b), &(c, d)| {
            inst.weight(c, d).total_cmp(&inst.weight(a, b)).then(a.cmp(&c)).then(b.cmp(&d))
        });
        assert_eq!(bucket, cmp);
    }

    #[test]
    fn dead_end_without_abundance() {
        let inst = Instance::new(RawInstance {
            m: 2,
            n: 2,
            properties: vec![vec![1, 2]],
            lower: vec![],
            upper: vec![BoundEntry { k: 1, l: 1, value: 0 }, BoundEntry { k: 2, l: 1, value: 1 }],
            weights: WeightSource::Explicit(WeightMatrix::from_fn(2, 2, |i, j| (4 - i - j) as f64)),
        })
        .unwrap();
        // item 1 takes position 2; nothing may ever occupy position 1
        assert!(matches!(solve_approx(&inst), Err(Error::DeadEnd { position: 1 })));
    }
}
