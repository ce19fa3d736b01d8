use crate::bitset::ElementSet;
use crate::cost::BigCost;
use crate::instance::{Covering, EdgeIdx, OcpInstance};
use crate::trace::{step_cost, EvalError};

use super::{require_coverable, SolveError, SolveResult, SolveStats};

/// Repeatedly takes the edge with the smallest residual weight among those
/// that still cover an uncovered required label. Ties go to the edge
/// declared first.
pub fn solve_greedy(instance: &OcpInstance) -> Result<SolveResult, SolveError> {
    require_coverable(instance)?;
    let required = instance.required_set();
    let mut covered = ElementSet::new(instance.universe_size());
    let mut sequence = Vec::new();
    let mut cost = BigCost::zero();
    let mut stats = SolveStats::default();

    while !required.is_subset(&covered) {
        let mut best: Option<(u64, usize)> = None;
        for (i, edge) in instance.edges().iter().enumerate() {
            let residual = edge.set().difference(&covered);
            if !residual.intersects(required) {
                continue;
            }
            stats.generated += 1;
            let u = instance
                .set_weight(&residual)
                .ok_or(EvalError::WeightOverflow(sequence.len()))?;
            if best.is_none_or(|(bu, _)| u < bu) {
                best = Some((u, i));
            }
        }
        let (u, i) = best.expect("coverable instance always has a candidate");
        covered.union_with(instance.edges()[i].set());
        sequence.push(EdgeIdx(i));
        cost += step_cost(u);
        stats.expanded += 1;
    }

    Ok(SolveResult {
        covering: Covering::new(sequence),
        cost,
        optimal: false,
        stats,
    })
}
