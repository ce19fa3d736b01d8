//! Depth-first branch and bound over partial sequences.
//!
//! The incumbent starts at the greedy covering. A node is cut when its
//! accumulated cost plus [`lower_bound`] reaches the incumbent, or when the
//! same covered set was already reached at no greater cost. Children are
//! explored cheapest marginal cost first.

use std::collections::HashMap;

use crate::bitset::ElementSet;
use crate::cost::BigCost;
use crate::instance::{Covering, EdgeIdx, ElementIdx, OcpInstance};
use crate::trace::{step_cost, EvalError};

use super::{greedy::solve_greedy, require_coverable, SolveError, SolveResult, SolveStats, SolverLimits};

/// Every uncovered required label must land in some later residual set,
/// whose weight is then at least that label's weight. So the remaining cost
/// is at least `2^w` for the heaviest uncovered label `w`.
pub fn lower_bound(instance: &OcpInstance, covered: &ElementSet) -> BigCost {
    instance
        .required_set()
        .difference(covered)
        .iter()
        .map(|i| instance.weight(ElementIdx(i)))
        .max()
        .map_or_else(BigCost::zero, BigCost::pow2)
}

pub fn solve_bnb(instance: &OcpInstance) -> Result<SolveResult, SolveError> {
    solve_bnb_with(instance, &SolverLimits::default())
}

pub fn solve_bnb_with(
    instance: &OcpInstance,
    limits: &SolverLimits,
) -> Result<SolveResult, SolveError> {
    require_coverable(instance)?;
    let greedy = solve_greedy(instance)?;
    let mut search = Search {
        instance,
        limits,
        best_cost: greedy.cost,
        best: greedy.covering,
        sequence: Vec::new(),
        seen: HashMap::new(),
        stats: SolveStats::default(),
    };
    let start = ElementSet::new(instance.universe_size());
    search.visit(&start, &BigCost::zero())?;
    Ok(SolveResult {
        covering: search.best,
        cost: search.best_cost,
        optimal: true,
        stats: search.stats,
    })
}

struct Search<'a> {
    instance: &'a OcpInstance,
    limits: &'a SolverLimits,
    best_cost: BigCost,
    best: Covering,
    sequence: Vec<EdgeIdx>,
    // cheapest accumulated cost seen per covered set
    seen: HashMap<ElementSet, BigCost>,
    stats: SolveStats,
}

impl Search<'_> {
    fn visit(&mut self, covered: &ElementSet, acc: &BigCost) -> Result<(), SolveError> {
        self.stats.expanded += 1;
        if self.instance.required_set().is_subset(covered) {
            if acc < &self.best_cost {
                self.best_cost = acc.clone();
                self.best = Covering::new(self.sequence.clone());
                self.stats.incumbent_updates += 1;
            }
            return Ok(());
        }
        if acc + &lower_bound(self.instance, covered) >= self.best_cost {
            self.stats.pruned += 1;
            return Ok(());
        }
        match self.seen.get_mut(covered) {
            Some(prev) if &*prev <= acc => {
                self.stats.pruned += 1;
                return Ok(());
            }
            Some(prev) => *prev = acc.clone(),
            None => {
                if self.seen.len() < self.limits.max_states {
                    self.seen.insert(covered.clone(), acc.clone());
                }
            }
        }

        let mut children = Vec::new();
        for (i, edge) in self.instance.edges().iter().enumerate() {
            let u = self
                .instance
                .residual_weight(edge, covered)
                .ok_or(EvalError::WeightOverflow(self.sequence.len()))?;
            if u == 0 {
                continue;
            }
            children.push((u, i));
        }
        children.sort_unstable();
        self.stats.generated += children.len() as u64;

        for (u, i) in children {
            let next = covered.union(self.instance.edges()[i].set());
            let next_acc = acc + &step_cost(u);
            self.sequence.push(EdgeIdx(i));
            self.visit(&next, &next_acc)?;
            self.sequence.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn greedy_optimal_instance_closes_without_improvement() {
        let r = solve_bnb(&fixtures::test_a()).unwrap();
        assert_eq!(r.cost.to_u128(), Some(592));
        assert_eq!(r.stats.incumbent_updates, 0);
    }

    #[test]
    fn improves_on_greedy() {
        let b = fixtures::test_b();
        let r = solve_bnb(&b).unwrap();
        assert_eq!(r.cost.to_u128(), Some(292));
        assert!(r.stats.incumbent_updates >= 1);
    }

    #[test]
    fn bound_values() {
        let b = fixtures::test_b();
        let none = ElementSet::new(b.universe_size());
        assert_eq!(lower_bound(&b, &none), BigCost::pow2(8));
        let all = b.required_set().clone();
        assert!(lower_bound(&b, &all).is_zero());
    }
}
