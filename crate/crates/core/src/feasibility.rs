//! The abundance-of-items sufficient condition and exact feasibility for
//! small instances.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Instance, Ranking};
use crate::oracle;

pub const DEFAULT_FEASIBILITY_CAP: usize = 10;

/// Abundance status at one position `k` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbundanceStep {
    pub k: usize,
    /// Properties (1-based) whose upper bound grows by at least one at `k`.
    pub growing: Vec<usize>,
    /// Items whose every property is in `growing`.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbundanceReport {
    pub steps: Vec<AbundanceStep>,
    pub satisfied: bool,
    /// Set when the instance has lower bounds, which the condition ignores.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl AbundanceReport {
    pub fn min_count(&self) -> usize {
        self.steps.iter().map(|s| s.count).min().unwrap_or(0)
    }
}

/// For each position `k`, counts the items that could be appended at `k`
/// regardless of what precedes them: those whose properties all have
/// `U[k-1] + 1 <= U[k]` (with `U[0] = 0`). The condition holds when every
/// count reaches `n`, and then a feasible ranking exists.
pub fn abundance_check(inst: &Instance) -> AbundanceReport {
    let (n, p) = (inst.n(), inst.p());
    let mut growing = vec![false; p];
    let mut steps = Vec::with_capacity(n);
    for k in 1..=n {
        for (l, g) in growing.iter_mut().enumerate() {
            let prev = if k == 1 { 0 } else { inst.upper(k - 1, l) };
            *g = prev < inst.upper(k, l);
        }
        let count = (0..inst.m())
            .filter(|&i| inst.item_properties(i).iter().all(|&l| growing[l as usize]))
            .count();
        steps.push(AbundanceStep {
            k,
            growing: (0..p).filter(|&l| growing[l]).map(|l| l + 1).collect(),
            count,
        });
    }
    let satisfied = steps.iter().all(|s| s.count >= n);
    let warning = inst.first_lower_bound().map(|(k, l)| {
        format!(
            "lower bound at (k={k}, l={}) is ignored; abundance covers upper bounds only",
            l + 1
        )
    });
    AbundanceReport { steps, satisfied, warning }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Ranking),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides feasibility by exhaustive search. Exponential; capped at
/// `DEFAULT_FEASIBILITY_CAP` items.
pub fn feasibility_exact(inst: &Instance) -> Result<Feasibility> {
    feasibility_exact_capped(inst, DEFAULT_FEASIBILITY_CAP)
}

pub fn feasibility_exact_capped(inst: &Instance, cap: usize) -> Result<Feasibility> {
    if inst.m() > cap {
        return Err(Error::FeasibilityCap { m: inst.m(), cap });
    }
    Ok(match oracle::find_feasible(inst) {
        Some(r) => Feasibility::Feasible(r),
        None => Feasibility::Infeasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::WeightMatrix;
    use crate::model::{check_constraints, BoundEntry, RawInstance, WeightSource};

    fn inst(m: usize, n: usize, properties: Vec<Vec<usize>>, upper: Vec<BoundEntry>) -> Instance {
        Instance::new(RawInstance {
            m,
            n,
            properties,
            lower: vec![],
            upper,
            weights: WeightSource::Explicit(WeightMatrix::zeros(m, n)),
        })
        .unwrap()
    }

    fn cap_first(n: usize) -> Vec<BoundEntry> {
        (1..=n).map(|k| BoundEntry { k, l: 1, value: 1 }).collect()
    }

    #[test]
    fn unconstrained_is_abundant() {
        let rep = abundance_check(&inst(5, 3, vec![], vec![]));
        assert!(rep.satisfied);
        assert!(rep.steps.iter().all(|s| s.growing.is_empty() && s.count == 5));
    }

    #[test]
    fn feasible_but_not_abundant() {
        let i = inst(4, 3, vec![vec![1, 3], vec![2, 4]], cap_first(3));
        let rep = abundance_check(&i);
        assert!(!rep.satisfied);
        assert_eq!(rep.steps[0].growing, vec![1, 2]);
        assert_eq!(rep.steps[1].growing, vec![2]);
        assert_eq!(rep.steps[1].count, 2);
        // Yet (1, 2, 4) is feasible: the condition is only sufficient.
        let r = Ranking::from_one_based(&[1, 2, 4], 4).unwrap();
        assert!(check_constraints(&i, &r).unwrap().feasible);
        assert!(feasibility_exact(&i).unwrap().is_feasible());
    }

    #[test]
    fn free_items_restore_abundance() {
        let rep = abundance_check(&inst(6, 3, vec![vec![1, 3], vec![2, 4]], cap_first(3)));
        assert!(rep.satisfied);
        assert!(rep.min_count() >= 4);
    }

    #[test]
    fn pigeonhole() {
        let i = inst(2, 2, vec![vec![1, 2]], vec![BoundEntry { k: 2, l: 1, value: 1 }]);
        assert_eq!(feasibility_exact(&i).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn single_cap_fixture_feasible() {
        let i = inst(4, 4, vec![vec![1, 2]], vec![BoundEntry { k: 2, l: 1, value: 1 }]);
        match feasibility_exact(&i).unwrap() {
            Feasibility::Feasible(r) => assert!(check_constraints(&i, &r).unwrap().feasible),
            Feasibility::Infeasible => panic!("fixture is feasible"),
        }
    }

    #[test]
    fn cap_and_warning() {
        let big = inst(11, 2, vec![], vec![]);
        assert!(matches!(feasibility_exact(&big), Err(Error::FeasibilityCap { m: 11, cap: 10 })));
        let with_lower = Instance::new(RawInstance {
            m: 3,
            n: 2,
            properties: vec![vec![1]],
            lower: vec![BoundEntry { k: 2, l: 1, value: 1 }],
            upper: vec![],
            weights: WeightSource::Explicit(WeightMatrix::zeros(3, 2)),
        })
        .unwrap();
        assert!(abundance_check(&with_lower).warning.is_some());
    }
}
