//! Exhaustive enumeration of ordered coverings.
//!
//! Every sequence of distinct edges is evaluated from scratch with the
//! residual-trace evaluator. Repeated edges are never needed: a repeat has
//! an empty residual and adds nothing.

use crate::cost::BigCost;
use crate::instance::{Covering, EdgeIdx, OcpInstance};
use crate::trace::{covering_cost, covers};

use super::{require_coverable, SolveError, SolveResult, SolveStats, SolverLimits};

pub fn solve_exact_perm(instance: &OcpInstance) -> Result<SolveResult, SolveError> {
    solve_exact_perm_with(instance, &SolverLimits::default())
}

pub fn solve_exact_perm_with(
    instance: &OcpInstance,
    limits: &SolverLimits,
) -> Result<SolveResult, SolveError> {
    require_coverable(instance)?;
    let n = instance.edges().len();
    if n > limits.max_perm_edges {
        return Err(SolveError::Capacity {
            what: "edge count",
            limit: limits.max_perm_edges,
            actual: n,
        });
    }
    let mut search = Enumeration {
        instance,
        used: vec![false; n],
        sequence: Vec::with_capacity(n),
        best: None,
        stats: SolveStats::default(),
    };
    search.visit()?;
    let (cost, covering) = search.best.expect("coverable instance has a covering");
    Ok(SolveResult {
        covering,
        cost,
        optimal: true,
        stats: search.stats,
    })
}

struct Enumeration<'a> {
    instance: &'a OcpInstance,
    used: Vec<bool>,
    sequence: Vec<EdgeIdx>,
    best: Option<(BigCost, Covering)>,
    stats: SolveStats,
}

impl Enumeration<'_> {
    fn visit(&mut self) -> Result<(), SolveError> {
        self.stats.expanded += 1;
        let candidate = Covering::new(self.sequence.clone());
        if covers(self.instance, &candidate)? {
            let cost = covering_cost(self.instance, &candidate)?;
            if self.best.as_ref().is_none_or(|(b, _)| &cost < b) {
                if self.best.is_some() {
                    self.stats.incumbent_updates += 1;
                }
                self.best = Some((cost, candidate));
            }
        }
        for i in 0..self.used.len() {
            if self.used[i] {
                continue;
            }
            self.stats.generated += 1;
            self.used[i] = true;
            self.sequence.push(EdgeIdx(i));
            self.visit()?;
            self.sequence.pop();
            self.used[i] = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_optima() {
        assert_eq!(
            solve_exact_perm(&fixtures::test_a()).unwrap().cost.to_u128(),
            Some(592)
        );
        let r = solve_exact_perm(&fixtures::test_b()).unwrap();
        assert_eq!(r.cost.to_u128(), Some(292));
        // 4 edges: 1 + 4 + 12 + 24 + 24 sequences
        assert_eq!(r.stats.expanded, 65);
    }

    #[test]
    fn edge_guard() {
        let tight = SolverLimits {
            max_perm_edges: 3,
            ..SolverLimits::default()
        };
        assert!(matches!(
            solve_exact_perm_with(&fixtures::test_b(), &tight),
            Err(SolveError::Capacity { what: "edge count", limit: 3, actual: 4 })
        ));
    }
}
