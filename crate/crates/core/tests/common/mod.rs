#![allow(dead_code)]

use std::collections::BTreeSet;

use ocp::harness::{gen_random_3p, gen_random_ocp, Family, GenParams};
use ocp::reduction::{GadgetEdgeKind, ReductionMap};
use ocp::{residual_trace, Covering, EdgeIdx, OcpInstance, ThreePartitionInstance};

/// Structural checks on a budget-feasible covering of a reduced instance.
/// Returns a description of each violation; empty means all three hold.
///
/// 1. every assignment edge with a nonempty residual comes after its opening edge
/// 2. exactly `m` assignment edges have nonempty residuals
/// 3. their label contributions are 3-sets, pairwise disjoint, covering all labels
pub fn structure_violations(
    map: &ReductionMap,
    instance: &OcpInstance,
    covering: &Covering,
) -> Vec<String> {
    let mut out = Vec::new();
    let trace = residual_trace(instance, covering).expect("covering evaluates");
    let mut active = Vec::new();
    for (pos, step) in trace.steps.iter().enumerate() {
        let role = &map.edges[step.edge.0];
        if role.kind != GadgetEdgeKind::Assignment || step.residual.is_empty() {
            continue;
        }
        let opening = map.edge_idx(GadgetEdgeKind::Opening, role.bin, role.triplet);
        if !covering.sequence[..pos].contains(&opening) {
            out.push(format!("{} at step {} is not opened first", role.name, pos + 1));
        }
        let labels: Vec<usize> = step
            .residual
            .iter()
            .filter(|x| instance.is_required(**x))
            .map(|x| x.0)
            .collect();
        active.push((role.name.clone(), labels));
    }

    if active.len() != map.params.m {
        out.push(format!(
            "{} active assignment edges, expected {}",
            active.len(),
            map.params.m
        ));
    }

    let mut seen = BTreeSet::new();
    for (name, labels) in &active {
        if labels.len() != 3 {
            out.push(format!("{name} contributes {} labels", labels.len()));
        }
        for &l in labels {
            if !seen.insert(l) {
                out.push(format!("label {l} contributed twice"));
            }
        }
    }
    if seen.len() != map.a.len() {
        out.push(format!("contributions cover {} of {} labels", seen.len(), map.a.len()));
    }
    out
}

/// Every valid 3-Partition instance with the given bin count and `B`, as a
/// sorted multiset: values satisfy `B < 4a` and `2a < B` and sum to `mB`.
pub fn exhaustive_3p(m: usize, b: u64) -> Vec<ThreePartitionInstance> {
    let values: Vec<u64> = (1..b).filter(|&a| 4 * a > b && 2 * a < b).collect();
    let mut out = Vec::new();
    multisets(&values, 3 * m, m as u64 * b, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|a| ThreePartitionInstance::new(m, b, a))
        .collect()
}

/// Nondecreasing sequences of `len` items drawn from `values` summing to `sum`.
fn multisets(values: &[u64], len: usize, sum: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if len == 0 {
        if sum == 0 {
            out.push(current.clone());
        }
        return;
    }
    for (i, &v) in values.iter().enumerate() {
        if v > sum {
            break;
        }
        current.push(v);
        multisets(&values[i..], len - 1, sum - v, current, out);
        current.pop();
    }
}

/// All valid instances with `m` in `ms` and `B <= max_b`.
pub fn exhaustive_suite(ms: &[usize], max_b: u64) -> Vec<ThreePartitionInstance> {
    ms.iter()
        .flat_map(|&m| (1..=max_b).flat_map(move |b| exhaustive_3p(m, b)))
        .collect()
}

/// Seeded random instances with at most 6 edges, 8 labels and weights up
/// to 5. Sizes cycle with the seed so small and large shapes both appear.
pub fn random_suite(count: u64) -> Vec<(String, OcpInstance)> {
    (0..count)
        .map(|seed| {
            let mut p = GenParams::new(Family::RandomOcp, seed);
            p.labels = 1 + (seed % 8) as usize;
            p.edges = 1 + ((seed / 8) % 6) as usize;
            p.extras = (seed % 3) as usize;
            p.max_weight = 5;
            p.max_edge_size = 1 + (seed % 4) as usize;
            (format!("random-{seed}"), gen_random_ocp(&p).expect("valid knobs"))
        })
        .collect()
}

/// Number of index triples that sum to `B`.
pub fn triplet_count(tp: &ThreePartitionInstance) -> usize {
    let n = tp.a.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if tp.a[i] + tp.a[j] + tp.a[k] == tp.b {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Three-bin instances from `family` whose reduction stays small enough for
/// the exact search: seeds are scanned in order and instances with more than
/// `max_triplets` valid triples are skipped.
pub fn three_bin(
    family: Family,
    count: usize,
    max_triplets: usize,
) -> Vec<(u64, ThreePartitionInstance)> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        let mut p = GenParams::new(family, seed);
        p.m = 3;
        p.b_min = 20;
        p.b_max = 40;
        let tp = gen_random_3p(&p).expect("feasible range");
        if triplet_count(&tp) <= max_triplets {
            out.push((seed, tp));
        }
        seed += 1;
    }
    out
}

pub fn names(instance: &OcpInstance, covering: &Covering) -> Vec<String> {
    covering
        .iter()
        .map(|e: EdgeIdx| instance.edges()[e.0].name.clone())
        .collect()
}
