//! Cheapest-path search over covered sets.
//!
//! The marginal cost of an edge depends only on which elements are already
//! covered, never on the order that covered them. So the covered set is a
//! complete search state and Dijkstra's algorithm over those states finds an
//! optimal covering.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use crate::bitset::ElementSet;
use crate::cost::BigCost;
use crate::instance::{Covering, EdgeIdx, OcpInstance};
use crate::trace::{step_cost, EvalError};

use super::{check_universe, require_coverable, SolveError, SolveResult, SolveStats, SolverLimits};

pub fn solve_exact_dp(instance: &OcpInstance) -> Result<SolveResult, SolveError> {
    solve_exact_dp_with(instance, &SolverLimits::default())
}

pub fn solve_exact_dp_with(
    instance: &OcpInstance,
    limits: &SolverLimits,
) -> Result<SolveResult, SolveError> {
    let start = ElementSet::new(instance.universe_size());
    Ok(search(instance, &start, limits, None)?.expect("uncapped search on a coverable instance"))
}

/// Optimal covering if its cost is at most `cap`, otherwise `None`. States
/// costlier than `cap` are never expanded.
pub fn solve_exact_dp_capped(
    instance: &OcpInstance,
    limits: &SolverLimits,
    cap: &BigCost,
) -> Result<Option<SolveResult>, SolveError> {
    let start = ElementSet::new(instance.universe_size());
    search(instance, &start, limits, Some(cap))
}

/// Cheapest cost of covering the remaining required labels when `covered`
/// is already covered.
pub fn optimal_completion_cost(
    instance: &OcpInstance,
    covered: &ElementSet,
    limits: &SolverLimits,
) -> Result<BigCost, SolveError> {
    Ok(search(instance, covered, limits, None)?
        .expect("uncapped search on a coverable instance")
        .cost)
}

struct Node {
    covered: ElementSet,
    cost: BigCost,
    parent: Option<(usize, EdgeIdx)>,
}

fn search(
    instance: &OcpInstance,
    start: &ElementSet,
    limits: &SolverLimits,
    cap: Option<&BigCost>,
) -> Result<Option<SolveResult>, SolveError> {
    require_coverable(instance)?;
    check_universe(instance, limits)?;
    let required = instance.required_set();
    let cap_log = cap.map(BigCost::floor_log2);

    let mut nodes = vec![Node {
        covered: start.clone(),
        cost: BigCost::zero(),
        parent: None,
    }];
    let mut index: HashMap<ElementSet, usize> = HashMap::from([(start.clone(), 0)]);
    // (cost, insertion order, node)
    let mut heap = BinaryHeap::from([Reverse((BigCost::zero(), 0u64, 0usize))]);
    let mut pushes = 0u64;
    let mut stats = SolveStats::default();

    while let Some(Reverse((cost, _, id))) = heap.pop() {
        if cost > nodes[id].cost {
            continue;
        }
        if required.is_subset(&nodes[id].covered) {
            let mut seq = Vec::new();
            let mut at = id;
            while let Some((prev, e)) = nodes[at].parent {
                seq.push(e);
                at = prev;
            }
            seq.reverse();
            return Ok(Some(SolveResult {
                covering: Covering::new(seq),
                cost,
                optimal: true,
                stats,
            }));
        }
        stats.expanded += 1;
        let covered = nodes[id].covered.clone();
        for (i, edge) in instance.edges().iter().enumerate() {
            let u = instance
                .residual_weight(edge, &covered)
                .ok_or(EvalError::WeightOverflow(0))?;
            if u == 0 {
                continue;
            }
            // a single term above the cap's top bit already exceeds it
            if cap_log.is_some_and(|top| top.is_none_or(|top| u > top)) {
                stats.pruned += 1;
                continue;
            }
            let next_cost = &cost + &step_cost(u);
            if cap.is_some_and(|c| &next_cost > c) {
                stats.pruned += 1;
                continue;
            }
            stats.generated += 1;
            let next = covered.union(edge.set());
            let next_id = match index.entry(next) {
                Entry::Occupied(o) => {
                    let nid = *o.get();
                    if nodes[nid].cost <= next_cost {
                        continue;
                    }
                    nodes[nid].cost = next_cost.clone();
                    nodes[nid].parent = Some((id, EdgeIdx(i)));
                    nid
                }
                Entry::Vacant(v) => {
                    limits.check_states(nodes.len() + 1)?;
                    let nid = nodes.len();
                    nodes.push(Node {
                        covered: v.key().clone(),
                        cost: next_cost.clone(),
                        parent: Some((id, EdgeIdx(i))),
                    });
                    v.insert(nid);
                    nid
                }
            };
            pushes += 1;
            heap.push(Reverse((next_cost, pushes, next_id)));
        }
    }
    Ok(None)
}
