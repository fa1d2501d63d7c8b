//! Min-cost flow solver for disjoint properties with lower and upper bounds.
//!
//! Each property gets a chain of nodes `rho(c, n) -> rho(c, n-1) -> ... ->
//! rho(c, 0)`; a unit of flow that leaves the chain at `rho(c, k-1)` towards
//! position node `gamma(k)` stands for an item of that property placed at
//! position `k`. The arcs between `rho(c, k)` and `rho(c, k-1)` are parallel
//! unit arcs, one per admissible item, so their number caps how many items
//! of the property may sit in the top `k`. The `r`-th of them costs
//! `W[i_r][k+1] - W[i_r][k]` (`W[i][n+1] = 0`), so a path exiting at `k`
//! telescopes to `-W[i][k]`. Lower bounds subtract a dominating constant `M`
//! from the cheapest `L` arcs of a layer, which every optimal flow then uses.
//!
//! Parallel arcs are stored as one arc with a sorted per-unit cost list, so
//! the network has `O(n p)` arc objects. Costs are scaled by `2^20` and
//! rounded to integers before solving.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::{Instance, Ranking};
use crate::outcome::{Infeasible, Outcome};

/// Multiplier applied to weights before rounding to integer costs.
pub const COST_SCALE: f64 = (1u64 << 20) as f64;

const MAX_MAGNITUDE: i128 = 1 << 62;
const UNREACHED: i64 = i64::MAX;

/// Node roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Source,
    Sink,
    /// Position node for position `k` (1-based).
    Position(usize),
    /// Chain node `rho(c, k)`, `k` in `0..=n`.
    Chain(usize, usize),
}

/// One property chain. The chain of items without any property has
/// `property == None` and vacuous bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub property: Option<usize>,
    /// The chain's best `n` items, ascending.
    pub items: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// `s -> rho(c, n)`, one unit per item.
    Supply { chain: usize },
    /// Parallel arcs `rho(c, k) -> rho(c, k-1)`.
    Layer { chain: usize, k: usize },
    /// `rho(c, k-1) -> gamma(k)`.
    Exit { chain: usize, k: usize },
    /// `gamma(k) -> t`.
    Drain { k: usize },
}

/// A bundle of parallel unit arcs. Its capacity is `costs.len()` and the
/// `f`-th unit of flow pays `costs[f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub kind: ArcKind,
    pub from: usize,
    pub to: usize,
    /// Per-unit costs, non-decreasing.
    pub costs: Vec<i64>,
    /// Units at the front of `costs` carrying the `-M` lower-bound discount.
    pub mandatory: usize,
    pub flow: usize,
}

impl Arc {
    pub fn capacity(&self) -> usize {
        self.costs.len()
    }
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    n: usize,
    chains: Vec<Chain>,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    /// `layer_index[c][k - 1]` is the arc id of layer `(c, k)`.
    layer_index: Vec<Vec<usize>>,
    big_m: i64,
    /// `sum_{l, k} L[k][l]`.
    lower_total: i64,
}

impl FlowNetwork {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        2 + self.n + self.chains.len() * (self.n + 1)
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn big_m(&self) -> i64 {
        self.big_m
    }

    pub fn lower_total(&self) -> i64 {
        self.lower_total
    }

    /// The parallel arcs between `rho(c, k)` and `rho(c, k-1)`.
    pub fn layer(&self, chain: usize, k: usize) -> &Arc {
        &self.arcs[self.layer_index[chain][k - 1]]
    }

    pub fn node_id(&self, node: Node) -> usize {
        match node {
            Node::Source => 0,
            Node::Sink => 1,
            Node::Position(k) => 1 + k,
            Node::Chain(c, k) => 2 + self.n + c * (self.n + 1) + k,
        }
    }

    fn add_arc(&mut self, kind: ArcKind, from: Node, to: Node, costs: Vec<i64>, mandatory: usize) -> usize {
        let (from, to) = (self.node_id(from), self.node_id(to));
        let id = self.arcs.len();
        self.arcs.push(Arc { kind, from, to, costs, mandatory, flow: 0 });
        self.out_arcs[from].push(id);
        self.in_arcs[to].push(id);
        id
    }

    /// Net inflow minus outflow at every node other than `s` and `t`
    /// is zero, and no arc exceeds its capacity.
    pub fn is_conserving(&self) -> bool {
        let mut balance = vec![0i64; self.node_count()];
        for a in &self.arcs {
            if a.flow > a.capacity() {
                return false;
            }
            balance[a.from] -= a.flow as i64;
            balance[a.to] += a.flow as i64;
        }
        balance.iter().skip(2).all(|&b| b == 0) && balance[0] == -balance[1]
    }

    /// Total cost of the current flow.
    pub fn cost(&self) -> i64 {
        self.arcs.iter().map(|a| a.costs[..a.flow].iter().sum::<i64>()).sum()
    }
}

/// Weight scaled to integer cost units.
fn scaled(inst: &Instance, i: usize, j: usize) -> i64 {
    (inst.weight(i, j) * COST_SCALE).round() as i64
}

/// Builds the flow network of a `delta <= 1` instance.
pub fn build_network(inst: &Instance) -> Result<FlowNetwork> {
    inst.require_delta(1)?;
    let (m, n) = (inst.m(), inst.n());

    let mut chains: Vec<Chain> = inst
        .properties()
        .iter()
        .enumerate()
        .map(|(l, items)| Chain { property: Some(l), items: items.iter().copied().take(n).collect() })
        .collect();
    let free: Vec<usize> = (0..m).filter(|&i| inst.item_properties(i).is_empty()).take(n).collect();
    if !free.is_empty() {
        chains.push(Chain { property: None, items: free });
    }

    let mut max_w: i64 = 0;
    for chain in &chains {
        for &i in &chain.items {
            let w = inst.weight(i, 0) * COST_SCALE;
            if !w.is_finite() || w.abs() >= MAX_MAGNITUDE as f64 {
                return Err(Error::Overflow(format!("weight of item {} is too large to scale", i + 1)));
            }
            // rows are non-increasing, so position 1 is the row maximum
            max_w = max_w.max(scaled(inst, i, 0));
        }
    }
    let big_m = 1i128 + n as i128 * (max_w as i128 + 1);
    if n as i128 * big_m > MAX_MAGNITUDE {
        return Err(Error::Overflow(format!("n * M = {} exceeds 2^62", n as i128 * big_m)));
    }
    let big_m = big_m as i64;

    let node_count = 2 + n + chains.len() * (n + 1);
    let mut net = FlowNetwork {
        n,
        chains: Vec::new(),
        arcs: Vec::new(),
        out_arcs: vec![Vec::new(); node_count],
        in_arcs: vec![Vec::new(); node_count],
        layer_index: vec![Vec::with_capacity(n); chains.len()],
        big_m,
        lower_total: 0,
    };

    let mut lower_total = 0i64;
    for (c, chain) in chains.iter().enumerate() {
        net.add_arc(
            ArcKind::Supply { chain: c },
            Node::Source,
            Node::Chain(c, n),
            vec![0; chain.items.len()],
            0,
        );
        for k in (1..=n).rev() {
            let (upper, lower) = match chain.property {
                Some(l) => (inst.upper(k, l) as usize, inst.lower(k, l) as usize),
                None => (k, 0),
            };
            lower_total += lower as i64;
            let units = upper.min(chain.items.len());
            let mandatory = lower.min(units);
            let mut costs: Vec<i64> = chain.items[..units]
                .iter()
                .map(|&i| {
                    let next = if k < n { scaled(inst, i, k) } else { 0 };
                    next - scaled(inst, i, k - 1)
                })
                .collect();
            for c in &mut costs[..mandatory] {
                *c -= big_m;
            }
            // Monge order already sorts the costs; rounding can swap ties.
            costs.sort_unstable();
            let id = net.add_arc(ArcKind::Layer { chain: c, k }, Node::Chain(c, k), Node::Chain(c, k - 1), costs, mandatory);
            net.layer_index[c].push(id);
        }
        net.layer_index[c].reverse();
        for k in 1..=n {
            net.add_arc(ArcKind::Exit { chain: c, k }, Node::Chain(c, k - 1), Node::Position(k), vec![0], 0);
        }
    }
    for k in 1..=n {
        net.add_arc(ArcKind::Drain { k }, Node::Position(k), Node::Sink, vec![0], 0);
    }
    net.chains = chains;
    net.lower_total = lower_total;
    Ok(net)
}

#[derive(Debug, Clone)]
pub struct FlowSolution {
    pub outcome: Outcome,
    pub network: FlowNetwork,
    /// Units of flow routed from `s` to `t`.
    pub flow_value: usize,
    /// Scaled total cost.
    pub cost: i64,
    /// Number of `(k, l)` pairs with a positive lower bound that are met.
    pub lower_bounds_met: usize,
}

impl FlowSolution {
    /// Ranking value recovered from the flow cost, `-(cost + M sum L) / 2^20`.
    pub fn value_from_cost(&self) -> f64 {
        let scaled = -(self.cost as i128 + self.network.big_m as i128 * self.network.lower_total as i128);
        scaled as f64 / COST_SCALE
    }
}

pub fn solve_flow(inst: &Instance) -> Result<Outcome> {
    solve_flow_detailed(inst).map(|s| s.outcome)
}

pub fn solve_flow_detailed(inst: &Instance) -> Result<FlowSolution> {
    inst.require_monge()?;
    let mut net = build_network(inst)?;
    let n = net.n;
    let mut potential = initial_potentials(&net);
    let mut flow_value = 0;
    while flow_value < n {
        if !augment(&mut net, &mut potential) {
            break;
        }
        flow_value += 1;
        debug_assert!(net.is_conserving());
    }
    let cost = net.cost();

    let p = inst.p();
    let mut lower_bounds_met = 0;
    let mut unmet = None;
    for (c, chain) in net.chains.iter().enumerate() {
        let Some(l) = chain.property else { continue };
        for k in 1..=n {
            let lower = inst.lower(k, l) as usize;
            if lower == 0 {
                continue;
            }
            let layer = net.layer(c, k);
            if layer.mandatory == lower && layer.flow >= layer.mandatory {
                lower_bounds_met += 1;
            } else if unmet.is_none() {
                unmet = Some((k, l + 1));
            }
        }
    }
    debug_assert!(p == 0 || net.chains.len() >= p);

    let outcome = if flow_value < n {
        Outcome::Infeasible(Infeasible::FlowShort { flow: flow_value, needed: n })
    } else if let Some((k, property)) = unmet {
        Outcome::Infeasible(Infeasible::LowerBoundUnmet { k, property })
    } else {
        Outcome::Ranked(extract_ranking(&net))
    };
    Ok(FlowSolution { outcome, network: net, flow_value, cost, lower_bounds_met })
}

/// Within each chain, the `r`-th exit (by position) receives the chain's
/// `r`-th best item.
fn extract_ranking(net: &FlowNetwork) -> Ranking {
    let mut ranking = vec![usize::MAX; net.n];
    let mut next_item = vec![0usize; net.chains.len()];
    for a in &net.arcs {
        if let ArcKind::Exit { chain, k } = a.kind {
            if a.flow > 0 {
                ranking[k - 1] = net.chains[chain].items[next_item[chain]];
                next_item[chain] += 1;
            }
        }
    }
    debug_assert!(ranking.iter().all(|&i| i != usize::MAX));
    Ranking::from_vec_unchecked(ranking)
}

/// Shortest distances from `s` over the initial (empty-flow) network, in
/// topological order: source, each chain top to bottom, positions, sink.
fn initial_potentials(net: &FlowNetwork) -> Vec<i64> {
    let n = net.n;
    let mut order = Vec::with_capacity(net.node_count());
    order.push(net.node_id(Node::Source));
    for c in 0..net.chains.len() {
        for k in (0..=n).rev() {
            order.push(net.node_id(Node::Chain(c, k)));
        }
    }
    for k in 1..=n {
        order.push(net.node_id(Node::Position(k)));
    }
    order.push(net.node_id(Node::Sink));

    let mut dist = vec![UNREACHED; net.node_count()];
    dist[0] = 0;
    for u in order {
        if dist[u] == UNREACHED {
            continue;
        }
        for &a in &net.out_arcs[u] {
            let arc = &net.arcs[a];
            if let Some(&c) = arc.costs.first() {
                let d = dist[u] + c;
                if d < dist[arc.to] {
                    dist[arc.to] = d;
                }
            }
        }
    }
    dist
}

/// One Dijkstra run on reduced costs followed by a unit augmentation.
/// Returns false when `t` is unreachable.
fn augment(net: &mut FlowNetwork, potential: &mut [i64]) -> bool {
    let count = net.node_count();
    let mut dist = vec![UNREACHED; count];
    // (arc id, forward?)
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; count];
    let mut done = vec![false; count];
    let mut heap = BinaryHeap::new();
    dist[0] = 0;
    heap.push(Reverse((0i64, 0usize)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        let mut relax = |v: usize, cost: i64, via: (usize, bool), heap: &mut BinaryHeap<Reverse<(i64, usize)>>| {
            debug_assert!(potential[v] != UNREACHED, "residual arc into a node unseen at start");
            let reduced = cost + potential[u] - potential[v];
            debug_assert!(reduced >= 0, "negative reduced cost {reduced}");
            let nd = d + reduced;
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some(via);
                heap.push(Reverse((nd, v)));
            }
        };
        for &a in &net.out_arcs[u] {
            let arc = &net.arcs[a];
            if arc.flow < arc.capacity() {
                relax(arc.to, arc.costs[arc.flow], (a, true), &mut heap);
            }
        }
        for &a in &net.in_arcs[u] {
            let arc = &net.arcs[a];
            if arc.flow > 0 {
                relax(arc.from, -arc.costs[arc.flow - 1], (a, false), &mut heap);
            }
        }
    }
    let sink = net.node_id(Node::Sink);
    if dist[sink] == UNREACHED {
        return false;
    }
    for v in 0..count {
        if dist[v] != UNREACHED {
            potential[v] += dist[v];
        }
    }
    let mut v = sink;
    while let Some((a, forward)) = parent[v] {
        let arc = &mut net.arcs[a];
        if forward {
            arc.flow += 1;
            v = arc.from;
        } else {
            arc.flow -= 1;
            v = arc.to;
        }
    }
    debug_assert_eq!(v, 0);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::WeightMatrix;
    use crate::model::{ranking_value, BoundEntry, RawInstance, WeightSource};

    fn inst(
        m: usize,
        n: usize,
        properties: Vec<Vec<usize>>,
        lower: Vec<BoundEntry>,
        upper: Vec<BoundEntry>,
        w: WeightMatrix,
    ) -> Instance {
        Instance::new(RawInstance { m, n, properties, lower, upper, weights: WeightSource::Explicit(w) })
            .unwrap()
    }

    fn product(m: usize, n: usize) -> WeightMatrix {
        WeightMatrix::from_fn(m, n, |i, j| ((m - i) * (n + 1 - j)) as f64)
    }

    #[test]
    fn layer_multiplicities() {
        let i = inst(2, 2, vec![vec![1, 2]], vec![], vec![BoundEntry { k: 1, l: 1, value: 1 }], product(2, 2));
        let net = build_network(&i).unwrap();
        assert_eq!(net.layer(0, 1).capacity(), 1);
        assert_eq!(net.layer(0, 2).capacity(), 2);
        assert_eq!(net.chains().len(), 1);
    }

    #[test]
    fn node_count_formula() {
        let i = inst(4, 3, vec![vec![1, 3], vec![2, 4]], vec![], vec![], product(4, 3));
        assert_eq!(build_network(&i).unwrap().node_count(), 13);
    }

    #[test]
    fn big_m_on_cheapest_arc() {
        let i = inst(
            4,
            3,
            vec![vec![1, 2], vec![3, 4]],
            vec![BoundEntry { k: 2, l: 1, value: 1 }, BoundEntry { k: 3, l: 1, value: 1 }],
            vec![],
            product(4, 3),
        );
        let net = build_network(&i).unwrap();
        let layer = net.layer(0, 2);
        assert_eq!(layer.mandatory, 1);
        assert_eq!(layer.capacity(), 2);
        // cost of item 1 between positions 2 and 3: (4*2 - 4*3) scaled, minus M
        let plain = ((4.0 * 2.0 - 4.0 * 3.0) * COST_SCALE) as i64;
        assert_eq!(layer.costs[0], plain - net.big_m());
        assert!(layer.costs[1] > -net.big_m() / 2);
        assert_eq!(net.layer(0, 1).mandatory, 0);
        assert_eq!(net.lower_total(), 2);
    }

    #[test]
    fn lower_bound_moves_second_item() {
        let i = inst(
            4,
            2,
            vec![vec![1, 2], vec![3, 4]],
            vec![BoundEntry { k: 2, l: 2, value: 1 }],
            vec![],
            WeightMatrix::from_fn(4, 2, |i, j| ((4 - i) * (2 - j)) as f64),
        );
        let sol = solve_flow_detailed(&i).unwrap();
        let r = sol.outcome.ranking().unwrap();
        assert_eq!(r.to_one_based(), vec![1, 3]);
        assert_eq!(ranking_value(&i, r).unwrap(), 10.0);
        assert_eq!(sol.value_from_cost(), 10.0);
        assert_eq!(sol.lower_bounds_met, 1);
        assert!(sol.network.is_conserving());
    }

    #[test]
    fn unconstrained_identity() {
        let i = inst(6, 4, vec![vec![2, 5]], vec![], vec![], product(6, 4));
        let r = solve_flow(&i).unwrap().into_ranking().unwrap();
        assert_eq!(r.items(), &[0, 1, 2, 3]);
    }

    #[test]
    fn infeasible_lower_bound() {
        // both positions must hold property-1 items, but there is only one
        let i = inst(
            3,
            2,
            vec![vec![1]],
            vec![BoundEntry { k: 1, l: 1, value: 1 }, BoundEntry { k: 2, l: 1, value: 2 }],
            vec![],
            product(3, 2),
        );
        assert!(matches!(
            solve_flow(&i).unwrap(),
            Outcome::Infeasible(Infeasible::LowerBoundUnmet { .. })
        ));
    }

    #[test]
    fn infeasible_upper_bound() {
        let i = inst(2, 2, vec![vec![1, 2]], vec![], vec![BoundEntry { k: 2, l: 1, value: 1 }], product(2, 2));
        assert_eq!(
            solve_flow(&i).unwrap(),
            Outcome::Infeasible(Infeasible::FlowShort { flow: 1, needed: 2 })
        );
    }

    #[test]
    fn rejects_overlap() {
        let i = inst(3, 2, vec![vec![1, 2], vec![2]], vec![], vec![], product(3, 2));
        assert!(build_network(&i).is_err());
    }
}
