//! Minimizers for the total covering cost.
//!
//! [`solve_greedy`] is the residual-weight heuristic. [`solve_exact_dp`],
//! [`solve_exact_perm`] and [`solve_bnb`] are exact and are cross-checked
//! against each other in the test suites.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cost::BigCost;
use crate::instance::{Covering, OcpInstance};
use crate::trace::EvalError;

mod bnb;
mod dp;
mod greedy;
mod perm;

pub use bnb::{lower_bound, solve_bnb, solve_bnb_with};
pub use dp::{optimal_completion_cost, solve_exact_dp, solve_exact_dp_capped, solve_exact_dp_with};
pub use greedy::solve_greedy;
pub use perm::{solve_exact_perm, solve_exact_perm_with};

/// Environment variables overriding [`SolverLimits::default`].
pub const ENV_MAX_UNIVERSE: &str = "OCP_MAX_UNIVERSE";
pub const ENV_MAX_PERM_EDGES: &str = "OCP_MAX_PERM_EDGES";
pub const ENV_MAX_STATES: &str = "OCP_MAX_STATES";

/// Explicit capacity guards for the exact solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    /// Largest universe the covered-set search accepts.
    pub max_universe: usize,
    /// Largest edge count the permutation oracle accepts.
    pub max_perm_edges: usize,
    /// Largest number of distinct covered sets a search may record.
    pub max_states: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_universe: 64,
            max_perm_edges: 9,
            max_states: 2_000_000,
        }
    }
}

impl SolverLimits {
    /// Defaults, overridden by `OCP_MAX_UNIVERSE`, `OCP_MAX_PERM_EDGES` and
    /// `OCP_MAX_STATES` when set.
    pub fn from_env() -> Result<Self, String> {
        let mut limits = Self::default();
        for (var, slot) in [
            (ENV_MAX_UNIVERSE, &mut limits.max_universe),
            (ENV_MAX_PERM_EDGES, &mut limits.max_perm_edges),
            (ENV_MAX_STATES, &mut limits.max_states),
        ] {
            if let Ok(v) = std::env::var(var) {
                *slot = v
                    .trim()
                    .parse()
                    .map_err(|_| format!("{var}={v:?} is not a nonnegative integer"))?;
            }
        }
        Ok(limits)
    }

    fn check_states(&self, count: usize) -> Result<(), SolveError> {
        if count > self.max_states {
            return Err(SolveError::Capacity {
                what: "search state count",
                limit: self.max_states,
                actual: count,
            });
        }
        Ok(())
    }

    /// Limits loose enough for reduced instances with up to three bins.
    pub fn generous() -> Self {
        SolverLimits {
            max_universe: 4096,
            max_perm_edges: 9,
            max_states: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("some required label is covered by no edge")]
    Uncoverable,
    #[error("{what} is {actual}, above the solver limit {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    /// Search nodes (or greedy steps) processed.
    pub expanded: u64,
    /// Successor nodes created.
    pub generated: u64,
    /// Nodes cut by bound or dominance.
    pub pruned: u64,
    /// Times the best known covering improved after initialization.
    pub incumbent_updates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub covering: Covering,
    pub cost: BigCost,
    /// True only when the method proves no cheaper covering exists.
    pub optimal: bool,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Greedy,
    Dp,
    Perm,
    Bnb,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Greedy, Method::Dp, Method::Perm, Method::Bnb];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Method::Greedy => "greedy",
            Method::Dp => "dp",
            Method::Perm => "perm",
            Method::Bnb => "bnb",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Method::Greedy),
            "dp" => Ok(Method::Dp),
            "perm" => Ok(Method::Perm),
            "bnb" => Ok(Method::Bnb),
            other => Err(format!("unknown method {other:?} (greedy|dp|perm|bnb)")),
        }
    }
}

pub fn solve(
    instance: &OcpInstance,
    method: Method,
    limits: &SolverLimits,
) -> Result<SolveResult, SolveError> {
    match method {
        Method::Greedy => solve_greedy(instance),
        Method::Dp => solve_exact_dp_with(instance, limits),
        Method::Perm => solve_exact_perm_with(instance, limits),
        Method::Bnb => solve_bnb_with(instance, limits),
    }
}

fn require_coverable(instance: &OcpInstance) -> Result<(), SolveError> {
    if instance.is_coverable() {
        Ok(())
    } else {
        Err(SolveError::Uncoverable)
    }
}

fn check_universe(instance: &OcpInstance, limits: &SolverLimits) -> Result<(), SolveError> {
    if instance.universe_size() > limits.max_universe {
        return Err(SolveError::Capacity {
            what: "universe size",
            limit: limits.max_universe,
            actual: instance.universe_size(),
        });
    }
    Ok(())
}
