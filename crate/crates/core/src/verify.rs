//! Polynomial-time certificate check for the decision version.
//!
//! The running sum never holds a term larger than the budget: any step whose
//! residual weight exceeds `⌊log₂ C⌋` is rejected on the spot, so `2^u` is
//! never formed for a huge `u`.

use std::fmt;

use thiserror::Error;

use crate::bitset::ElementSet;
use crate::cost::BigCost;
use crate::instance::{Covering, OcpInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictReason {
    Accepted,
    NotACovering,
    BudgetExceeded,
    OversizedExponent,
    MalformedCertificate,
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            VerdictReason::Accepted => "accepted",
            VerdictReason::NotACovering => "not-a-covering",
            VerdictReason::BudgetExceeded => "budget-exceeded",
            VerdictReason::OversizedExponent => "oversized-exponent",
            VerdictReason::MalformedCertificate => "malformed-certificate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub reason: VerdictReason,
    /// Step at which the certificate was rejected, when one applies.
    pub step: Option<usize>,
}

impl Verdict {
    fn reject(reason: VerdictReason, step: Option<usize>) -> Self {
        Verdict {
            accepted: false,
            reason,
            step,
        }
    }

    fn accept() -> Self {
        Verdict {
            accepted: true,
            reason: VerdictReason::Accepted,
            step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("instance has no budget to verify against")]
    MissingBudget,
}

pub fn verify_certificate(
    instance: &OcpInstance,
    covering: &Covering,
) -> Result<Verdict, VerifyError> {
    let budget = instance.budget().ok_or(VerifyError::MissingBudget)?;
    let universe = instance.universe_size();

    // 1. ids and coverage of the required labels
    let mut union = ElementSet::new(universe);
    for (pos, e) in covering.iter().enumerate() {
        match instance.edge(e) {
            Ok(edge) => union.union_with(edge.set()),
            Err(_) => return Ok(Verdict::reject(VerdictReason::MalformedCertificate, Some(pos))),
        }
    }
    if !instance.required_set().is_subset(&union) {
        return Ok(Verdict::reject(VerdictReason::NotACovering, None));
    }

    // 2 + 3. residual weights with a running seen-set, early reject on
    // exponents above floor(log2 C)
    let max_exponent = budget.floor_log2();
    let mut seen = ElementSet::new(universe);
    let mut total = BigCost::zero();
    for (pos, e) in covering.iter().enumerate() {
        let edge = instance.edge(e).expect("checked above");
        let mut weight: u128 = 0;
        for &x in &edge.elements {
            if seen.insert(x.0) {
                weight += u128::from(instance.weight(x));
            }
        }
        if weight == 0 {
            continue;
        }
        match max_exponent {
            Some(limit) if weight <= u128::from(limit) => {}
            _ => return Ok(Verdict::reject(VerdictReason::OversizedExponent, Some(pos))),
        }
        total += BigCost::pow2(weight as u64);
        if &total > budget {
            return Ok(Verdict::reject(VerdictReason::BudgetExceeded, Some(pos)));
        }
    }
    Ok(Verdict::accept())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::EdgeIdx;

    #[test]
    fn budget_boundary_on_test_b() {
        let b = fixtures::test_b();
        let cov = b.covering(&["E4", "E3", "E2", "E1"]).unwrap();
        let ok = verify_certificate(&b.with_budget(Some(292u64.into())), &cov).unwrap();
        assert!(ok.accepted);
        assert_eq!(ok.reason, VerdictReason::Accepted);
        let no = verify_certificate(&b.with_budget(Some(291u64.into())), &cov).unwrap();
        assert!(!no.accepted);
        assert_eq!(no.reason, VerdictReason::BudgetExceeded);
    }

    #[test]
    fn oversized_exponent_rejected_early() {
        let inst = OcpInstance::builder()
            .label("s1", 11)
            .edge("E1", ["s1"])
            .budget(Some(1024u64.into()))
            .build()
            .unwrap();
        let cov = inst.covering(&["E1"]).unwrap();
        let v = verify_certificate(&inst, &cov).unwrap();
        assert_eq!(v.reason, VerdictReason::OversizedExponent);
        assert_eq!(v.step, Some(0));

        let inst = inst.with_budget(Some(2048u64.into()));
        assert!(verify_certificate(&inst, &cov).unwrap().accepted);
    }

    #[test]
    fn zero_budget_rejects_any_positive_step() {
        let inst = OcpInstance::builder()
            .label("s1", 1)
            .edge("E1", ["s1"])
            .budget(Some(BigCost::zero()))
            .build()
            .unwrap();
        let cov = inst.covering(&["E1"]).unwrap();
        assert_eq!(
            verify_certificate(&inst, &cov).unwrap().reason,
            VerdictReason::OversizedExponent
        );
    }

    #[test]
    fn structural_rejections() {
        let b = fixtures::test_b().with_budget(Some(10_000u64.into()));
        let partial = b.covering(&["E1"]).unwrap();
        assert_eq!(
            verify_certificate(&b, &partial).unwrap().reason,
            VerdictReason::NotACovering
        );
        let bad = Covering::new(vec![EdgeIdx(0), EdgeIdx(99)]);
        let v = verify_certificate(&b, &bad).unwrap();
        assert_eq!(v.reason, VerdictReason::MalformedCertificate);
        assert_eq!(v.step, Some(1));
        assert_eq!(
            verify_certificate(&b.with_budget(None), &partial),
            Err(VerifyError::MissingBudget)
        );
    }

    #[test]
    fn repeated_edges_cost_nothing() {
        let b = fixtures::test_b().with_budget(Some(292u64.into()));
        let cov = b.covering(&["E4", "E4", "E3", "E2", "E2", "E1"]).unwrap();
        assert!(verify_certificate(&b, &cov).unwrap().accepted);
    }
}
