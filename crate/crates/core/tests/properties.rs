use std::collections::HashSet;

use proptest::prelude::*;

use ocp::bitset::ElementSet;
use ocp::io::{parse_instance, serialize_instance};
use ocp::solvers::{
    lower_bound, optimal_completion_cost, solve_bnb, solve_exact_dp, solve_exact_perm,
    solve_greedy,
};
use ocp::trace::{covers, normalize_covering};
use ocp::{
    covering_cost, residual_trace, verify_certificate, BigCost, Covering, EdgeIdx, OcpInstance,
    SolverLimits,
};

/// Labels `s1..sn`, extras `x1..`, and edges `E1..` given as bitmasks over
/// the universe. A closing edge is added when the masks leave a label out.
fn build(label_w: &[u64], extra_w: &[u64], masks: &[u16], budget: Option<BigCost>) -> OcpInstance {
    let names: Vec<String> = (1..=label_w.len())
        .map(|i| format!("s{i}"))
        .chain((1..=extra_w.len()).map(|i| format!("x{i}")))
        .collect();
    let n = names.len();
    let mut masks: Vec<u16> = masks.iter().map(|m| m & ((1 << n) - 1)).filter(|&m| m != 0).collect();
    let all = masks.iter().fold(0, |a, m| a | m);
    if all != (1 << n) - 1 {
        masks.push(!all & ((1 << n) - 1));
    }
    let mut b = OcpInstance::builder();
    for (name, &w) in names.iter().zip(label_w) {
        b = b.label(name, w);
    }
    for (name, &w) in names[label_w.len()..].iter().zip(extra_w) {
        b = b.extra(name, w);
    }
    for (j, m) in masks.iter().enumerate() {
        b = b.edge(
            format!("E{}", j + 1),
            (0..n).filter(|i| m >> i & 1 == 1).map(|i| names[i].clone()),
        );
    }
    b.budget(budget).build().unwrap()
}

fn instance(max_edges: usize) -> impl Strategy<Value = OcpInstance> {
    (
        prop::collection::vec(1u64..=5, 1..=6),
        prop::collection::vec(1u64..=5, 0..=2),
        prop::collection::vec(1u16..u16::MAX, 1..max_edges),
    )
        .prop_map(|(l, x, m)| build(&l, &x, &m, None))
}

/// An instance with a covering: random picks with repeats, then every edge
/// in a shuffled order so the result always covers.
fn instance_and_covering() -> impl Strategy<Value = (OcpInstance, Covering)> {
    instance(6).prop_flat_map(|inst| {
        let n = inst.edges().len();
        let picks = prop::collection::vec(0..n, 0..6);
        let tail = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (Just(inst), picks, tail).prop_map(|(inst, picks, tail)| {
            let seq = picks.into_iter().chain(tail).map(EdgeIdx).collect();
            (inst, Covering::new(seq))
        })
    })
}

/// Straightforward evaluation by element name, summing plain integers.
fn naive_cost(inst: &OcpInstance, cov: &Covering) -> u128 {
    let mut seen = HashSet::new();
    let mut total = 0u128;
    for e in cov.iter() {
        let edge = &inst.edges()[e.0];
        let mut u = 0;
        for &x in &edge.elements {
            let el = inst.element(x);
            if seen.insert(el.name.clone()) {
                u += el.weight;
            }
        }
        if u > 0 {
            total += 1u128 << u;
        }
    }
    total
}

/// Decimal arithmetic on digit strings, independent of any big-integer crate.
fn dec_add(a: &str, b: &str) -> String {
    let (a, b): (Vec<u8>, Vec<u8>) = (a.bytes().rev().collect(), b.bytes().rev().collect());
    let mut out = Vec::new();
    let mut carry = 0;
    for i in 0..a.len().max(b.len()) {
        let d = a.get(i).map_or(0, |c| c - b'0') + b.get(i).map_or(0, |c| c - b'0') + carry;
        out.push(b'0' + d % 10);
        carry = d / 10;
    }
    if carry > 0 {
        out.push(b'0' + carry);
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

fn dec_pow2(e: u64) -> String {
    let mut s = "1".to_string();
    for _ in 0..e {
        s = dec_add(&s, &s);
    }
    s
}

fn dec_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn residual_sets_are_disjoint_and_exhaustive((inst, cov) in instance_and_covering()) {
        let trace = residual_trace(&inst, &cov).unwrap();
        let mut seen = HashSet::new();
        for step in &trace.steps {
            for x in &step.residual {
                prop_assert!(seen.insert(*x), "element {x:?} in two residual sets");
            }
            let w: u64 = step.residual.iter().map(|&x| inst.weight(x)).sum();
            prop_assert_eq!(w, step.weight);
        }
        let union: HashSet<_> = cov.iter().flat_map(|e| inst.edges()[e.0].elements.clone()).collect();
        prop_assert_eq!(seen, union);
    }

    #[test]
    fn cost_matches_naive_evaluation((inst, cov) in instance_and_covering()) {
        let cost = covering_cost(&inst, &cov).unwrap();
        prop_assert_eq!(cost.to_u128(), Some(naive_cost(&inst, &cov)));
    }

    #[test]
    fn prefix_costs_never_decrease((inst, cov) in instance_and_covering()) {
        let mut prev = BigCost::zero();
        for k in 0..=cov.len() {
            let prefix = Covering::new(cov.sequence[..k].to_vec());
            let c = covering_cost(&inst, &prefix).unwrap();
            prop_assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn verifier_agrees_with_evaluator((inst, cov) in instance_and_covering(), scale in 0u128..3, jitter in 0u128..64) {
        let cost = naive_cost(&inst, &cov);
        let budget = (cost * scale / 2).saturating_add(jitter).saturating_sub(32);
        let inst = inst.with_budget(Some(BigCost::from_u128(budget)));
        for k in 0..=cov.len() {
            let prefix = Covering::new(cov.sequence[..k].to_vec());
            let v = verify_certificate(&inst, &prefix).unwrap();
            let expect = covers(&inst, &prefix).unwrap() && naive_cost(&inst, &prefix) <= budget;
            prop_assert_eq!(v.accepted, expect, "{:?} budget {}", v, budget);
        }
    }

    #[test]
    fn normalization_keeps_cost_and_coverage((inst, cov) in instance_and_covering()) {
        let norm = normalize_covering(&inst, &cov).unwrap();
        prop_assert_eq!(covering_cost(&inst, &norm).unwrap(), covering_cost(&inst, &cov).unwrap());
        prop_assert!(covers(&inst, &norm).unwrap());
        let trace = residual_trace(&inst, &norm).unwrap();
        prop_assert!(trace.steps.iter().all(|s| !s.residual.is_empty()));
        let distinct: HashSet<_> = norm.iter().collect();
        prop_assert_eq!(distinct.len(), norm.len());
    }

    #[test]
    fn exact_solvers_agree(inst in instance(7)) {
        let dp = solve_exact_dp(&inst).unwrap();
        let perm = solve_exact_perm(&inst).unwrap();
        let bnb = solve_bnb(&inst).unwrap();
        prop_assert_eq!(&dp.cost, &perm.cost);
        prop_assert_eq!(&dp.cost, &bnb.cost);
        for r in [&dp, &perm, &bnb] {
            prop_assert_eq!(&covering_cost(&inst, &r.covering).unwrap(), &r.cost);
            prop_assert!(covers(&inst, &r.covering).unwrap());
        }
        let greedy = solve_greedy(&inst).unwrap();
        prop_assert!(greedy.cost >= dp.cost);
    }

    #[test]
    fn lower_bound_is_admissible((inst, cov) in instance_and_covering(), cut in 0usize..8) {
        let mut covered = ElementSet::new(inst.universe_size());
        for e in cov.iter().take(cut) {
            covered.union_with(inst.edges()[e.0].set());
        }
        let lb = lower_bound(&inst, &covered);
        let rest = optimal_completion_cost(&inst, &covered, &SolverLimits::default()).unwrap();
        prop_assert!(lb <= rest, "bound {} above completion {}", lb, rest);
    }

    #[test]
    fn bigcost_matches_u128(a in prop::collection::vec(0u64..120, 0..6), b in prop::collection::vec(0u64..120, 0..6)) {
        let x: u128 = a.iter().map(|&e| 1u128 << e).sum();
        let y: u128 = b.iter().map(|&e| 1u128 << e).sum();
        let (bx, by) = (BigCost::from_exponents(a), BigCost::from_exponents(b));
        prop_assert_eq!(bx.to_u128(), Some(x));
        prop_assert_eq!(bx.cmp(&by), x.cmp(&y));
        if let Some(s) = x.checked_add(y) {
            prop_assert_eq!((&bx + &by).to_u128(), Some(s));
        }
        prop_assert_eq!(BigCost::from_u128(x), bx);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bigcost_matches_decimal_oracle(
        a in prop::collection::vec(0u64..400, 0..8),
        b in prop::collection::vec(0u64..400, 0..8),
    ) {
        let da = a.iter().fold("0".to_string(), |acc, &e| dec_add(&acc, &dec_pow2(e)));
        let db = b.iter().fold("0".to_string(), |acc, &e| dec_add(&acc, &dec_pow2(e)));
        let (x, y) = (BigCost::from_exponents(a), BigCost::from_exponents(b));
        prop_assert_eq!(x.to_decimal_string(), da.clone());
        prop_assert_eq!((&x + &y).to_decimal_string(), dec_add(&da, &db));
        prop_assert_eq!(x.cmp(&y), dec_cmp(&da, &db));
        prop_assert_eq!(BigCost::parse_decimal(&da).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn instance_text_round_trips(
        inst in instance(8),
        budget in prop::option::of(prop::collection::vec(0u64..2000, 1..5)),
    ) {
        let inst = inst.with_budget(budget.map(BigCost::from_exponents));
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn budget_forms_agree(value in 1u128..u128::MAX) {
        let head = "ocp 1\nlabel s1 1\nedge E1 s1\n";
        let decimal = parse_instance(&format!("{head}budget {value}\n")).unwrap();
        let c = BigCost::from_u128(value);
        let exps: Vec<String> = c.terms().iter().map(u64::to_string).collect();
        let powers = parse_instance(&format!("{head}budget pow2 {}\n", exps.join(" "))).unwrap();
        prop_assert_eq!(decimal.budget(), Some(&c));
        prop_assert_eq!(powers.budget(), Some(&c));
    }
}
