//! Exhaustive search over ordered item selections. Used as ground truth.

use crate::error::{Error, Result};
use crate::model::{Instance, Ranking};

pub const DEFAULT_ORACLE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Lexicographically smallest optimal ranking, if any ranking is feasible.
    pub ranking: Option<Ranking>,
    pub value: f64,
    /// Complete feasible rankings visited.
    pub feasible_count: u64,
}

/// `m (m-1) ... (m-n+1)`, saturating.
pub fn falling_factorial(m: usize, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, t| acc.saturating_mul((m - t) as u128))
}

pub fn brute_force_solve(inst: &Instance) -> Result<OracleResult> {
    brute_force_solve_capped(inst, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_solve_capped(inst: &Instance, cap: u128) -> Result<OracleResult> {
    let count = falling_factorial(inst.m(), inst.n());
    if count > cap {
        return Err(Error::OracleCap { count, cap });
    }
    let mut search = Search::new(inst, false);
    search.descend(0, 0.0);
    Ok(OracleResult {
        ranking: search.best.map(Ranking::from_vec_unchecked),
        value: if search.best_value.is_finite() { search.best_value } else { 0.0 },
        feasible_count: search.feasible,
    })
}

/// Returns some feasible ranking, stopping at the first one found.
pub(crate) fn find_feasible(inst: &Instance) -> Option<Ranking> {
    let mut search = Search::new(inst, true);
    search.descend(0, 0.0);
    search.best.map(Ranking::from_vec_unchecked)
}

struct Search<'a> {
    inst: &'a Instance,
    first_only: bool,
    used: Vec<bool>,
    prefix: Vec<usize>,
    counts: Vec<u32>,
    best: Option<Vec<usize>>,
    best_value: f64,
    feasible: u64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, first_only: bool) -> Self {
        Search {
            inst,
            first_only,
            used: vec![false; inst.m()],
            prefix: Vec::with_capacity(inst.n()),
            counts: vec![0; inst.p()],
            best: None,
            best_value: f64::NEG_INFINITY,
            feasible: 0,
        }
    }

    fn prefix_ok(&self, k: usize) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(l, &c)| self.inst.lower(k, l) <= c && c <= self.inst.upper(k, l))
    }

    fn descend(&mut self, j: usize, value: f64) -> bool {
        let inst = self.inst;
        if j == inst.n() {
            self.feasible += 1;
            // Items are tried in increasing order, so the first ranking to
            // reach a value is the lexicographically smallest one.
            if value > self.best_value {
                self.best_value = value;
                self.best = Some(self.prefix.clone());
            }
            return self.first_only;
        }
        for i in 0..inst.m() {
            if self.used[i] {
                continue;
            }
            for &l in inst.item_properties(i) {
                self.counts[l as usize] += 1;
            }
            if self.prefix_ok(j + 1) {
                self.used[i] = true;
                self.prefix.push(i);
                let stop = self.descend(j + 1, value + inst.weight(i, j));
                self.prefix.pop();
                self.used[i] = false;
                if stop {
                    for &l in inst.item_properties(i) {
                        self.counts[l as usize] -= 1;
                    }
                    return true;
                }
            }
            for &l in inst.item_properties(i) {
                self.counts[l as usize] -= 1;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{MetricKind, MetricSpec, WeightMatrix};
    use crate::model::{check_constraints, BoundEntry, RawInstance, WeightSource};

    fn fixture() -> Instance {
        Instance::new(RawInstance {
            m: 4,
            n: 4,
            properties: vec![vec![1, 2]],
            lower: vec![],
            upper: vec![BoundEntry { k: 2, l: 1, value: 1 }],
            weights: WeightSource::Explicit(WeightMatrix::from_fn(4, 4, |i, j| {
                ((4 - i) * (4 - j)) as f64
            })),
        })
        .unwrap()
    }

    #[test]
    fn single_cap_optimum() {
        let inst = fixture();
        let res = brute_force_solve(&inst).unwrap();
        assert_eq!(res.ranking.clone().unwrap().to_one_based(), vec![1, 3, 2, 4]);
        assert_eq!(res.value, 29.0);
        assert!(check_constraints(&inst, res.ranking.as_ref().unwrap()).unwrap().feasible);
        // 24 permutations minus the 4 that open with items 1 and 2.
        assert_eq!(res.feasible_count, 20);
    }

    #[test]
    fn dcg_fixture() {
        let inst = Instance::new(RawInstance {
            m: 4,
            n: 3,
            properties: vec![vec![1, 3], vec![2, 4]],
            lower: vec![],
            upper: (1..=3).map(|k| BoundEntry { k, l: 1, value: 1 }).collect(),
            weights: WeightSource::Metric(MetricSpec::new(MetricKind::Dcg, vec![4.0, 3.0, 2.0, 1.0])),
        })
        .unwrap();
        let res = brute_force_solve(&inst).unwrap();
        assert_eq!(res.ranking.unwrap().to_one_based(), vec![1, 2, 4]);
        assert!((res.value - 6.392789260714372).abs() < 1e-9);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = fixture();
        assert!(matches!(
            brute_force_solve_capped(&inst, 23),
            Err(Error::OracleCap { count: 24, cap: 23 })
        ));
    }

    #[test]
    fn pigeonhole_infeasible() {
        let inst = Instance::new(RawInstance {
            m: 2,
            n: 2,
            properties: vec![vec![1, 2]],
            lower: vec![],
            upper: vec![BoundEntry { k: 2, l: 1, value: 1 }],
            weights: WeightSource::Explicit(WeightMatrix::zeros(2, 2)),
        })
        .unwrap();
        let res = brute_force_solve(&inst).unwrap();
        assert!(res.ranking.is_none());
        assert_eq!(res.feasible_count, 0);
        assert!(find_feasible(&inst).is_none());
    }
}
