//! Exact dynamic program over per-type counts.
//!
//! Items of equal type are interchangeable up to their index, and with
//! monotone Monge weights an optimal ranking always uses the best `s` items
//! of a type, in index order. A state is therefore the tuple
//! `(s_1, ..., s_q)` of how many items of each type fill the top
//! `k = sum s_t` positions, and its value is the best weight of such a prefix.
//! The table has at most `C(n + q, q)` entries, independent of `m`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{type_profile, Instance, Ranking, TypeProfile};
use crate::outcome::{Infeasible, Outcome};

pub const DEFAULT_STATE_BUDGET: u128 = 100_000_000;

/// Number of tuples with `sum s_t <= n` and `0 <= s_t <= caps[t]`.
///
/// Counting stops early once `limit` is exceeded; the returned value is then
/// some number above `limit`.
pub fn count_states(caps: &[usize], n: usize, limit: u128) -> u128 {
    // ways[t] = number of tuples over the types so far with sum exactly t
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for &cap in caps {
        let mut prefix = vec![0u128; n + 2];
        for t in 0..=n {
            prefix[t + 1] = prefix[t].saturating_add(ways[t]);
        }
        for t in 0..=n {
            let lo = t.saturating_sub(cap);
            ways[t] = prefix[t + 1] - prefix[lo];
        }
        let total = ways.iter().fold(0u128, |a, &b| a.saturating_add(b));
        if total > limit {
            return total;
        }
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Per-type caps `min(q_t, n)` used by the table.
pub fn type_caps(profile: &TypeProfile, n: usize) -> Vec<usize> {
    profile.classes.iter().map(|c| c.len().min(n)).collect()
}

/// Estimated table size for `inst`, stopping early above `limit`.
pub fn estimate_states(inst: &Instance, limit: u128) -> u128 {
    let profile = type_profile(inst);
    count_states(&type_caps(&profile, inst.n()), inst.n(), limit)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    /// `NEG_INFINITY` for infeasible or unreachable tuples.
    value: f64,
    /// Type placed at the last position of the best prefix.
    last: Option<u32>,
}

/// Filled table, one map per prefix length.
#[derive(Debug, Clone)]
pub struct DpTable {
    levels: Vec<HashMap<Box<[u32]>, Entry>>,
}

impl DpTable {
    /// Total number of tuples materialized, feasible or not.
    pub fn len(&self) -> usize {
        self.levels.iter().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of tuples holding a finite value.
    pub fn finite_len(&self) -> usize {
        self.levels
            .iter()
            .flat_map(|l| l.values())
            .filter(|e| e.value.is_finite())
            .count()
    }

    /// Value of a tuple, `None` if never materialized.
    pub fn value(&self, tuple: &[u32]) -> Option<f64> {
        let k: u32 = tuple.iter().sum();
        self.levels.get(k as usize)?.get(tuple).map(|e| e.value)
    }
}

#[derive(Debug, Clone)]
pub struct DpRun {
    pub outcome: Outcome,
    pub table: DpTable,
    pub profile: TypeProfile,
}

pub fn solve_dp(inst: &Instance) -> Result<Outcome> {
    solve_dp_with_budget(inst, DEFAULT_STATE_BUDGET).map(|run| run.outcome)
}

pub fn solve_dp_with_budget(inst: &Instance, budget: u128) -> Result<DpRun> {
    inst.require_monge()?;
    let n = inst.n();
    let profile = type_profile(inst);
    let caps = type_caps(&profile, n);
    let estimate = count_states(&caps, n, budget);
    if estimate > budget {
        return Err(Error::StateBudget { estimate, budget });
    }

    let q = profile.q();
    let p = inst.p();
    let mut levels: Vec<HashMap<Box<[u32]>, Entry>> = Vec::with_capacity(n + 1);
    let mut root = HashMap::new();
    root.insert(vec![0u32; q].into_boxed_slice(), Entry { value: 0.0, last: None });
    levels.push(root);

    let mut counts = vec![0u32; p];
    for k in 1..=n {
        let j = k - 1;
        // Successor tuples, in a deterministic order.
        let mut prev: Vec<&Box<[u32]>> = levels[j].keys().collect();
        prev.sort_unstable();
        let mut next: Vec<Box<[u32]>> = Vec::new();
        for tuple in prev {
            for t in 0..q {
                if (tuple[t] as usize) < caps[t] {
                    let mut succ = tuple.clone();
                    succ[t] += 1;
                    next.push(succ);
                }
            }
        }
        next.sort_unstable();
        next.dedup();

        let mut level = HashMap::with_capacity(next.len());
        for tuple in next {
            counts.iter_mut().for_each(|c| *c = 0);
            for (t, &s) in tuple.iter().enumerate() {
                if s > 0 {
                    for &l in &profile.type_props[t] {
                        counts[l as usize] += s;
                    }
                }
            }
            let fair = counts
                .iter()
                .enumerate()
                .all(|(l, &c)| inst.lower(k, l) <= c && c <= inst.upper(k, l));
            let mut entry = Entry { value: f64::NEG_INFINITY, last: None };
            if fair {
                let mut pred = tuple.clone();
                for t in 0..q {
                    if tuple[t] == 0 {
                        continue;
                    }
                    pred[t] -= 1;
                    let before = levels[j].get(&pred).map_or(f64::NEG_INFINITY, |e| e.value);
                    pred[t] += 1;
                    if before == f64::NEG_INFINITY {
                        continue;
                    }
                    let item = profile.classes[t][tuple[t] as usize - 1];
                    let value = before + inst.weight(item, j);
                    // strict: the smallest type index wins ties
                    if value > entry.value {
                        entry = Entry { value, last: Some(t as u32) };
                    }
                }
            }
            level.insert(tuple, entry);
        }
        levels.push(level);
    }

    let best = levels[n]
        .iter()
        .filter(|(_, e)| e.value.is_finite())
        .max_by(|(ta, a), (tb, b)| a.value.total_cmp(&b.value).then_with(|| tb.cmp(ta)))
        .map(|(t, _)| t.clone());

    let outcome = match best {
        None => Outcome::Infeasible(Infeasible::NoCompleteState),
        Some(mut tuple) => {
            let mut ranking = vec![0usize; n];
            for k in (1..=n).rev() {
                let t = levels[k][&tuple].last.expect("finite state has a predecessor") as usize;
                ranking[k - 1] = profile.classes[t][tuple[t] as usize - 1];
                tuple[t] -= 1;
            }
            Outcome::Ranked(Ranking::from_vec_unchecked(ranking))
        }
    };
    Ok(DpRun { outcome, table: DpTable { levels }, profile })
}
