//! Residual-set evaluation of a covering and its exact cost.

use thiserror::Error;

use crate::bitset::ElementSet;
use crate::cost::BigCost;
use crate::instance::{Covering, EdgeIdx, ElementIdx, OcpInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("edge index {0} does not exist in the instance")]
    UnknownEdge(usize),
    #[error("residual weight overflows 64 bits at step {0}")]
    WeightOverflow(usize),
    #[error("sequence does not cover the required labels")]
    NotACovering,
}

/// One position of a covering: the elements it covers for the first time,
/// their total weight, and the step's cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualStep {
    pub edge: EdgeIdx,
    pub residual: Vec<ElementIdx>,
    pub weight: u64,
    /// `2^weight`, or zero when the residual is empty.
    pub cost: BigCost,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResidualTrace {
    pub steps: Vec<ResidualStep>,
}

impl ResidualTrace {
    pub fn weights(&self) -> Vec<u64> {
        self.steps.iter().map(|s| s.weight).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Cost of covering `weight` new units.
pub fn step_cost(weight: u64) -> BigCost {
    if weight == 0 {
        BigCost::zero()
    } else {
        BigCost::pow2(weight)
    }
}

pub fn residual_trace(
    instance: &OcpInstance,
    covering: &Covering,
) -> Result<ResidualTrace, EvalError> {
    let mut seen = ElementSet::new(instance.universe_size());
    let mut steps = Vec::with_capacity(covering.len());
    for (pos, e) in covering.iter().enumerate() {
        let edge = instance
            .edge(e)
            .map_err(|_| EvalError::UnknownEdge(e.0))?;
        let mut residual = Vec::new();
        let mut weight = 0u64;
        for &x in &edge.elements {
            if seen.insert(x.0) {
                residual.push(x);
                weight = weight
                    .checked_add(instance.weight(x))
                    .ok_or(EvalError::WeightOverflow(pos))?;
            }
        }
        residual.sort_unstable();
        steps.push(ResidualStep {
            edge: e,
            residual,
            weight,
            cost: step_cost(weight),
        });
    }
    Ok(ResidualTrace { steps })
}

pub fn total_cost(trace: &ResidualTrace) -> BigCost {
    trace.steps.iter().map(|s| &s.cost).sum()
}

/// Convenience: `total_cost(residual_trace(..))`.
pub fn covering_cost(instance: &OcpInstance, covering: &Covering) -> Result<BigCost, EvalError> {
    residual_trace(instance, covering).map(|t| total_cost(&t))
}

/// Whether the edges of `covering` together contain every required label.
pub fn covers(instance: &OcpInstance, covering: &Covering) -> Result<bool, EvalError> {
    let mut union = ElementSet::new(instance.universe_size());
    for e in covering.iter() {
        let edge = instance
            .edge(e)
            .map_err(|_| EvalError::UnknownEdge(e.0))?;
        union.union_with(edge.set());
    }
    Ok(instance.required_set().is_subset(&union))
}

/// Drops every step whose residual set is empty. Cost and coverage are
/// unchanged and the result never repeats an edge.
pub fn normalize_covering(
    instance: &OcpInstance,
    covering: &Covering,
) -> Result<Covering, EvalError> {
    if !covers(instance, covering)? {
        return Err(EvalError::NotACovering);
    }
    let mut seen = ElementSet::new(instance.universe_size());
    let mut kept = Vec::with_capacity(covering.len());
    for e in covering.iter() {
        let set = instance
            .edge(e)
            .map_err(|_| EvalError::UnknownEdge(e.0))?
            .set();
        if !set.is_subset(&seen) {
            seen.union_with(set);
            kept.push(e);
        }
    }
    Ok(Covering::new(kept))
}
