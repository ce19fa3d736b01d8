//! Ordered covering with exponential step costs.
//!
//! An instance is a set of weighted labels and a list of edges over them.
//! A covering is an ordered sequence of edges whose union contains every
//! label. Each step pays `2^u`, where `u` is the total weight of the
//! elements that step covers for the first time, and the goal is the
//! cheapest covering.
//!
//! The crate provides exact big-integer costs ([`BigCost`]), a residual-set
//! evaluator, a budget verifier, greedy and exact solvers, the reduction
//! from 3-Partition, line-based file formats and a seeded experiment
//! harness. The `ocp` binary wraps all of it.

pub mod bitset;
pub mod cli;
pub mod cost;
pub mod fixtures;
pub mod harness;
pub mod instance;
pub mod io;
pub mod reduction;
pub mod solvers;
pub mod trace;
pub mod verify;

pub use cost::BigCost;
pub use instance::{Covering, EdgeIdx, ElementIdx, InstanceError, OcpInstance};
pub use reduction::{reduce_3p_to_ocp, Partition3, ThreePartitionInstance};
pub use solvers::{solve, Method, SolveError, SolveResult, SolverLimits};
pub use trace::{covering_cost, residual_trace, EvalError};
pub use verify::{verify_certificate, Verdict, VerdictReason};
