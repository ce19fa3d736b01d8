//! 3-Partition and its polynomial-time reduction to ordered covering.
//!
//! Every valid triplet `X_j` (three labels summing to `B`) is offered once per
//! bin `i` through a gadget pair:
//!
//! * opening edge `A_i_j = {omega_i_j}`, where `omega_i_j` weighs `w`;
//! * assignment edge `E_i_j = X_j ∪ {omega_i_j, tau_i_j}`, where `tau_i_j`
//!   weighs `t = 1`.
//!
//! With `w = t + B + ⌈log₂ m⌉ + 1` and budget `C = m(2^w + 2^{t+B})`, a
//! covering fits the budget exactly when it opens `m` gadgets and assigns a
//! partition of the labels into valid triplets, one per gadget.

use std::fmt;

use thiserror::Error;

use crate::cost::BigCost;
use crate::instance::{Covering, EdgeIdx, InstanceError, OcpInstance};
use crate::trace::{residual_trace, EvalError};
use crate::verify::{verify_certificate, Verdict};

/// Closing-token weight.
pub const CLOSING_WEIGHT: u64 = 1;

/// Largest bin count accepted by [`solve_3p_bruteforce`].
pub const BRUTEFORCE_MAX_BINS: usize = 4;

/// Label indices (0-based, increasing) of one triplet.
pub type Triplet = [usize; 3];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThreePartitionInstance {
    /// Number of bins.
    pub m: usize,
    /// Bin target.
    pub b: u64,
    /// The multiset, indexed by label.
    pub a: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoBins,
    WrongLength { expected: usize, actual: usize },
    SumMismatch { sum: u128, expected: u128 },
    /// `a_i ≤ B/4`.
    TooSmall { index: usize, value: u64 },
    /// `a_i ≥ B/2`.
    TooLarge { index: usize, value: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoBins => write!(f, "m must be positive"),
            Violation::WrongLength { expected, actual } => {
                write!(f, "expected 3m = {expected} values, found {actual}")
            }
            Violation::SumMismatch { sum, expected } => {
                write!(f, "values sum to {sum}, expected mB = {expected}")
            }
            Violation::TooSmall { index, value } => {
                write!(f, "a_{} = {value} is not above B/4", index + 1)
            }
            Violation::TooLarge { index, value } => {
                write!(f, "a_{} = {value} is not below B/2", index + 1)
            }
        }
    }
}

impl ThreePartitionInstance {
    pub fn new(m: usize, b: u64, a: Vec<u64>) -> Self {
        ThreePartitionInstance { m, b, a }
    }

    /// Every failed constraint; empty iff the instance is well formed.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.m == 0 {
            out.push(Violation::NoBins);
        }
        if self.a.len() != 3 * self.m {
            out.push(Violation::WrongLength {
                expected: 3 * self.m,
                actual: self.a.len(),
            });
        }
        let sum: u128 = self.a.iter().map(|&x| u128::from(x)).sum();
        let expected = self.m as u128 * u128::from(self.b);
        if sum != expected {
            out.push(Violation::SumMismatch { sum, expected });
        }
        let b = u128::from(self.b);
        for (index, &value) in self.a.iter().enumerate() {
            let v = u128::from(value);
            if 4 * v <= b {
                out.push(Violation::TooSmall { index, value });
            }
            if 2 * v >= b {
                out.push(Violation::TooLarge { index, value });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    fn triplet_sum(&self, t: &Triplet) -> u128 {
        t.iter().map(|&i| u128::from(self.a[i])).sum()
    }
}

/// Free-function form of [`ThreePartitionInstance::violations`].
pub fn validate_3p(tp: &ThreePartitionInstance) -> Vec<Violation> {
    tp.violations()
}

/// A split of the labels into `m` triplets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition3 {
    pub triplets: Vec<Triplet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("expected {expected} triplets, found {actual}")]
    WrongCount { expected: usize, actual: usize },
    #[error("label index {0} out of range")]
    OutOfRange(usize),
    #[error("label {} used more than once", .0 + 1)]
    Reused(usize),
    #[error("triplet {triplet:?} sums to {sum}, not B")]
    WrongSum { triplet: Triplet, sum: u128 },
}

impl Partition3 {
    /// Sorts each triplet and the list of triplets.
    pub fn canonical(mut self) -> Self {
        for t in &mut self.triplets {
            t.sort_unstable();
        }
        self.triplets.sort_unstable();
        self
    }

    /// Disjoint, complete, and every triplet sums to `B`.
    pub fn check(&self, tp: &ThreePartitionInstance) -> Result<(), PartitionError> {
        if self.triplets.len() != tp.m {
            return Err(PartitionError::WrongCount {
                expected: tp.m,
                actual: self.triplets.len(),
            });
        }
        let mut used = vec![false; tp.a.len()];
        for t in &self.triplets {
            for &i in t {
                let slot = used.get_mut(i).ok_or(PartitionError::OutOfRange(i))?;
                if std::mem::replace(slot, true) {
                    return Err(PartitionError::Reused(i));
                }
            }
            let sum = tp.triplet_sum(t);
            if sum != u128::from(tp.b) {
                return Err(PartitionError::WrongSum { triplet: *t, sum });
            }
        }
        // m triplets of 3 distinct in-range labels over 3m labels: complete
        Ok(())
    }
}

impl fmt::Display for Partition3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .triplets
            .iter()
            .map(|t| format!("{{{},{},{}}}", t[0] + 1, t[1] + 1, t[2] + 1))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All 3-subsets of labels summing to `B`, lexicographic in index order.
pub fn enumerate_valid_triplets(tp: &ThreePartitionInstance) -> Vec<Triplet> {
    let n = tp.a.len();
    let b = u128::from(tp.b);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if tp.triplet_sum(&[i, j, k]) == b {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetEdgeKind {
    Opening,
    Assignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Opening,
    Closing,
}

/// What a generated edge stands for. `bin` and `triplet` are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetEdge {
    pub name: String,
    pub kind: GadgetEdgeKind,
    pub bin: usize,
    pub triplet: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetToken {
    pub name: String,
    pub kind: TokenKind,
    pub bin: usize,
    pub triplet: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionParams {
    pub m: usize,
    pub b: u64,
    /// Closing-token weight.
    pub t: u64,
    /// Opening-token weight.
    pub w: u64,
}

impl ReductionParams {
    pub fn for_instance(m: usize, b: u64) -> Self {
        let t = CLOSING_WEIGHT;
        ReductionParams {
            m,
            b,
            t,
            w: t + b + ceil_log2(m as u64) + 1,
        }
    }

    /// `m(2^w + 2^{t+B})`.
    pub fn budget(&self) -> BigCost {
        (BigCost::pow2(self.w) + BigCost::pow2(self.t + self.b)).mul_u64(self.m as u64)
    }
}

/// Bookkeeping tying every generated edge and token back to its bin and
/// triplet.
///
/// Edges are laid out per bin, then per triplet, as `A_i_j, E_i_j`; the
/// instance edge with index `2(i·|T| + j)` is `A_i_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    pub params: ReductionParams,
    /// The source multiset.
    pub a: Vec<u64>,
    pub triplets: Vec<Triplet>,
    pub edges: Vec<GadgetEdge>,
    pub tokens: Vec<GadgetToken>,
    /// Set when the valid triplets leave some label uncovered; the instance
    /// then has no covering at all.
    pub infeasible: bool,
}

impl ReductionMap {
    pub fn source(&self) -> ThreePartitionInstance {
        ThreePartitionInstance::new(self.params.m, self.params.b, self.a.clone())
    }

    pub fn edge_idx(&self, kind: GadgetEdgeKind, bin: usize, triplet: usize) -> EdgeIdx {
        let base = 2 * (bin * self.triplets.len() + triplet);
        EdgeIdx(match kind {
            GadgetEdgeKind::Opening => base,
            GadgetEdgeKind::Assignment => base + 1,
        })
    }

    pub fn edge_role(&self, edge: EdgeIdx) -> Option<&GadgetEdge> {
        self.edges.get(edge.0)
    }

    pub fn triplet_index(&self, triplet: &Triplet) -> Option<usize> {
        let mut key = *triplet;
        key.sort_unstable();
        self.triplets.binary_search(&key).ok()
    }
}

pub fn label_name(index: usize) -> String {
    format!("alpha_{}", index + 1)
}

pub fn opening_edge_name(bin: usize, triplet: usize) -> String {
    format!("A_{}_{}", bin + 1, triplet + 1)
}

pub fn assignment_edge_name(bin: usize, triplet: usize) -> String {
    format!("E_{}_{}", bin + 1, triplet + 1)
}

pub fn opening_token_name(bin: usize, triplet: usize) -> String {
    format!("omega_{}_{}", bin + 1, triplet + 1)
}

pub fn closing_token_name(bin: usize, triplet: usize) -> String {
    format!("tau_{}_{}", bin + 1, triplet + 1)
}

/// `⌈log₂ n⌉` for `n ≥ 1`, exact on integers.
pub fn ceil_log2(n: u64) -> u64 {
    assert!(n > 0, "ceil_log2(0)");
    u64::from(64 - (n - 1).leading_zeros())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid 3-Partition instance: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("bin count {m} exceeds the brute-force limit {limit}")]
    Guard { m: usize, limit: usize },
    #[error("partition is not valid for the instance: {0}")]
    BadPartition(#[from] PartitionError),
    #[error("triplet {0:?} is not a valid triplet of the reduction")]
    UnknownTriplet(Triplet),
    #[error("failed to build reduced instance: {0}")]
    Build(#[from] InstanceError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub instance: OcpInstance,
    pub map: ReductionMap,
}

pub fn reduce_3p_to_ocp(tp: &ThreePartitionInstance) -> Result<Reduction, ReductionError> {
    let violations = tp.violations();
    if !violations.is_empty() {
        return Err(ReductionError::Invalid(violations));
    }
    let params = ReductionParams::for_instance(tp.m, tp.b);
    let triplets = enumerate_valid_triplets(tp);

    let mut builder = OcpInstance::builder();
    for (i, &value) in tp.a.iter().enumerate() {
        builder = builder.label(label_name(i), value);
    }
    let mut edges = Vec::with_capacity(2 * tp.m * triplets.len());
    let mut tokens = Vec::with_capacity(2 * tp.m * triplets.len());
    for bin in 0..tp.m {
        for (j, x) in triplets.iter().enumerate() {
            let omega = opening_token_name(bin, j);
            let tau = closing_token_name(bin, j);
            builder = builder.extra(&omega, params.w).extra(&tau, params.t);
            let a_name = opening_edge_name(bin, j);
            let e_name = assignment_edge_name(bin, j);
            builder = builder.edge(&a_name, [omega.clone()]);
            let members = x
                .iter()
                .map(|&l| label_name(l))
                .chain([omega.clone(), tau.clone()]);
            builder = builder.edge(&e_name, members);
            edges.push(GadgetEdge {
                name: a_name,
                kind: GadgetEdgeKind::Opening,
                bin,
                triplet: j,
            });
            edges.push(GadgetEdge {
                name: e_name,
                kind: GadgetEdgeKind::Assignment,
                bin,
                triplet: j,
            });
            tokens.push(GadgetToken {
                name: omega,
                kind: TokenKind::Opening,
                bin,
                triplet: j,
            });
            tokens.push(GadgetToken {
                name: tau,
                kind: TokenKind::Closing,
                bin,
                triplet: j,
            });
        }
    }
    let mut covered = vec![false; tp.a.len()];
    for t in &triplets {
        for &i in t {
            covered[i] = true;
        }
    }
    let infeasible = !covered.iter().all(|&c| c);
    let instance = builder
        .budget(Some(params.budget()))
        .allow_uncoverable(infeasible)
        .build()?;
    Ok(Reduction {
        instance,
        map: ReductionMap {
            params,
            a: tp.a.clone(),
            triplets,
            edges,
            tokens,
            infeasible,
        },
    })
}

/// The covering `(A_1_j(1), E_1_j(1), …, A_m_j(m), E_m_j(m))` built from a
/// partition, where bin `i` takes the `i`-th triplet. Its cost is exactly
/// the budget.
pub fn canonical_covering(
    tp: &ThreePartitionInstance,
    partition: &Partition3,
    map: &ReductionMap,
) -> Result<Covering, ReductionError> {
    partition.check(tp)?;
    let mut seq = Vec::with_capacity(2 * tp.m);
    for (bin, t) in partition.triplets.iter().enumerate() {
        let j = map
            .triplet_index(t)
            .ok_or(ReductionError::UnknownTriplet(*t))?;
        seq.push(map.edge_idx(GadgetEdgeKind::Opening, bin, j));
        seq.push(map.edge_idx(GadgetEdgeKind::Assignment, bin, j));
    }
    Ok(Covering::new(seq))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("instance has no budget")]
    MissingBudget,
    #[error("covering is not budget-feasible ({})", .0.reason)]
    NotFeasible(Verdict),
    #[error("instance does not match the reduction map")]
    MapMismatch,
    #[error(transparent)]
    Eval(#[from] EvalError),
    /// A budget-feasible covering whose structure is not a 3-partition.
    /// Indicates a bug in the reduction.
    #[error("reduction soundness failure: {0}")]
    Soundness(String),
}

/// Reads the 3-partition off a budget-feasible covering of a reduced
/// instance: each assignment edge with a nonempty residual contributes the
/// labels it covers first.
pub fn extract_partition(
    map: &ReductionMap,
    instance: &OcpInstance,
    covering: &Covering,
) -> Result<Partition3, ExtractError> {
    if instance.edges().len() != map.edges.len()
        || instance
            .edges()
            .iter()
            .zip(&map.edges)
            .any(|(e, g)| e.name != g.name)
        || instance.required_labels().len() != map.a.len()
    {
        return Err(ExtractError::MapMismatch);
    }
    let verdict = verify_certificate(instance, covering).map_err(|_| ExtractError::MissingBudget)?;
    if !verdict.accepted {
        return Err(ExtractError::NotFeasible(verdict));
    }

    let trace = residual_trace(instance, covering)?;
    let mut triplets = Vec::with_capacity(map.params.m);
    for step in &trace.steps {
        let role = map.edge_role(step.edge).ok_or(ExtractError::MapMismatch)?;
        if role.kind != GadgetEdgeKind::Assignment || step.residual.is_empty() {
            continue;
        }
        let labels: Vec<usize> = step
            .residual
            .iter()
            .filter(|x| instance.is_required(**x))
            .map(|x| x.0)
            .collect();
        let triplet: Triplet = labels.as_slice().try_into().map_err(|_| {
            ExtractError::Soundness(format!(
                "assignment edge {} contributes {} labels",
                role.name,
                labels.len()
            ))
        })?;
        triplets.push(triplet);
    }
    let partition = Partition3 { triplets };
    partition
        .check(&map.source())
        .map_err(|e| ExtractError::Soundness(e.to_string()))?;
    Ok(partition)
}

/// Independent backtracking oracle: always place the lowest unassigned label
/// together with two later unassigned labels.
pub fn solve_3p_bruteforce(
    tp: &ThreePartitionInstance,
) -> Result<Option<Partition3>, ReductionError> {
    solve_3p_bruteforce_with_limit(tp, BRUTEFORCE_MAX_BINS)
}

pub fn solve_3p_bruteforce_with_limit(
    tp: &ThreePartitionInstance,
    max_bins: usize,
) -> Result<Option<Partition3>, ReductionError> {
    let violations = tp.violations();
    if !violations.is_empty() {
        return Err(ReductionError::Invalid(violations));
    }
    if tp.m > max_bins {
        return Err(ReductionError::Guard {
            m: tp.m,
            limit: max_bins,
        });
    }
    let mut used = vec![false; tp.a.len()];
    let mut chosen = Vec::with_capacity(tp.m);
    if place(tp, &mut used, &mut chosen) {
        Ok(Some(Partition3 { triplets: chosen }))
    } else {
        Ok(None)
    }
}

fn place(tp: &ThreePartitionInstance, used: &mut [bool], chosen: &mut Vec<Triplet>) -> bool {
    let Some(first) = used.iter().position(|u| !u) else {
        return true;
    };
    let n = used.len();
    used[first] = true;
    for j in first + 1..n {
        if used[j] {
            continue;
        }
        for k in j + 1..n {
            if used[k] || tp.triplet_sum(&[first, j, k]) != u128::from(tp.b) {
                continue;
            }
            used[j] = true;
            used[k] = true;
            chosen.push([first, j, k]);
            if place(tp, used, chosen) {
                return true;
            }
            chosen.pop();
            used[j] = false;
            used[k] = false;
        }
    }
    used[first] = false;
    false
}
