//! Seeded instance generators and the greedy-versus-optimal gap experiment.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_integer::Integer;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cost::BigCost;
use crate::instance::OcpInstance;
use crate::reduction::ThreePartitionInstance;
use crate::solvers::{solve_exact_dp_with, solve_greedy, SolverLimits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    RandomOcp,
    /// 3-Partition instances built from `m` triples summing to `B`: always YES.
    Planted3p,
    /// 3-Partition instances sampled under the constraints only: status unknown.
    Unconstrained3p,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Family::RandomOcp => "random-ocp",
            Family::Planted3p => "planted-3p",
            Family::Unconstrained3p => "unconstrained-3p",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-ocp" => Ok(Family::RandomOcp),
            "planted-3p" => Ok(Family::Planted3p),
            "unconstrained-3p" => Ok(Family::Unconstrained3p),
            other => Err(format!(
                "unknown family {other:?} (random-ocp|planted-3p|unconstrained-3p)"
            )),
        }
    }
}

/// Generator knobs. The same parameters (seed included) always produce the
/// same instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub family: Family,
    pub seed: u64,
    /// Required labels (random-ocp).
    pub labels: usize,
    /// Auxiliary elements (random-ocp).
    pub extras: usize,
    pub edges: usize,
    pub max_weight: u64,
    /// Upper bound on the initial size of each edge before the coverage sweep.
    pub max_edge_size: usize,
    /// Bins (3-Partition families).
    pub m: usize,
    pub b_min: u64,
    pub b_max: u64,
}

impl GenParams {
    pub fn new(family: Family, seed: u64) -> Self {
        GenParams {
            family,
            seed,
            labels: 8,
            extras: 0,
            edges: 6,
            max_weight: 5,
            max_edge_size: 3,
            m: 2,
            b_min: 9,
            b_max: 15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("family {0} does not produce this kind of instance")]
    WrongFamily(Family),
    #[error("inconsistent generator knobs: {0}")]
    Knobs(String),
    #[error("no B in {b_min}..={b_max} admits {m} triples with values strictly between B/4 and B/2")]
    Infeasible { m: usize, b_min: u64, b_max: u64 },
    #[error("rejection sampling gave up after {0} attempts")]
    GaveUp(usize),
}

const REJECTION_ATTEMPTS: usize = 100_000;

/// Random weighted labels and edges. Every element is guaranteed to lie in
/// some edge: a final sweep drops each uncovered element into a random edge.
pub fn gen_random_ocp(params: &GenParams) -> Result<OcpInstance, GenError> {
    if params.family != Family::RandomOcp {
        return Err(GenError::WrongFamily(params.family));
    }
    let universe = params.labels + params.extras;
    if params.max_weight == 0 {
        return Err(GenError::Knobs("max weight must be positive".into()));
    }
    if universe > 0 && params.edges == 0 {
        return Err(GenError::Knobs("elements need at least one edge".into()));
    }
    if params.edges > 0 && (params.max_edge_size == 0 || universe == 0) {
        return Err(GenError::Knobs("edges need at least one element".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let names: Vec<String> = (1..=params.labels)
        .map(|i| format!("s{i}"))
        .chain((1..=params.extras).map(|i| format!("x{i}")))
        .collect();
    let weights: Vec<u64> = (0..universe)
        .map(|_| rng.gen_range(1..=params.max_weight))
        .collect();

    let mut members: Vec<Vec<usize>> = (0..params.edges)
        .map(|_| {
            let k = rng.gen_range(1..=params.max_edge_size.min(universe));
            let mut picked = sample(&mut rng, universe, k).into_vec();
            picked.sort_unstable();
            picked
        })
        .collect();
    let mut covered = vec![false; universe];
    for e in &members {
        for &x in e {
            covered[x] = true;
        }
    }
    for x in (0..universe).filter(|&x| !covered[x]) {
        let e = rng.gen_range(0..params.edges);
        members[e].push(x);
        members[e].sort_unstable();
    }

    let mut builder = OcpInstance::builder();
    for (i, (name, &w)) in names.iter().zip(&weights).enumerate() {
        builder = if i < params.labels {
            builder.label(name, w)
        } else {
            builder.extra(name, w)
        };
    }
    for (j, e) in members.iter().enumerate() {
        builder = builder.edge(format!("E{}", j + 1), e.iter().map(|&x| names[x].clone()));
    }
    Ok(builder.build().expect("generator output satisfies instance invariants"))
}

/// Values strictly between `B/4` and `B/2`.
fn value_range(b: u64) -> Option<(u64, u64)> {
    let lo = b / 4 + 1;
    let hi = b.checked_sub(1)? / 2;
    (lo <= hi).then_some((lo, hi))
}

fn sorted_triples(b: u64) -> Vec<[u64; 3]> {
    let Some((lo, hi)) = value_range(b) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for x in lo..=hi {
        for y in x..=hi {
            let Some(z) = b.checked_sub(x + y) else {
                continue;
            };
            if z >= y && z <= hi {
                out.push([x, y, z]);
            }
        }
    }
    out
}

pub fn gen_random_3p(params: &GenParams) -> Result<ThreePartitionInstance, GenError> {
    if params.m == 0 {
        return Err(GenError::Knobs("m must be positive".into()));
    }
    if params.b_min > params.b_max {
        return Err(GenError::Knobs("b-min exceeds b-max".into()));
    }
    let infeasible = GenError::Infeasible {
        m: params.m,
        b_min: params.b_min,
        b_max: params.b_max,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    match params.family {
        Family::RandomOcp => Err(GenError::WrongFamily(params.family)),
        Family::Planted3p => {
            let candidates: Vec<u64> = (params.b_min..=params.b_max)
                .filter(|&b| !sorted_triples(b).is_empty())
                .collect();
            let &b = candidates.choose(&mut rng).ok_or(infeasible)?;
            let triples = sorted_triples(b);
            let mut a = Vec::with_capacity(3 * params.m);
            for _ in 0..params.m {
                a.extend_from_slice(triples.choose(&mut rng).expect("nonempty"));
            }
            a.shuffle(&mut rng);
            Ok(ThreePartitionInstance::new(params.m, b, a))
        }
        Family::Unconstrained3p => {
            // 3m values in [lo, hi] can sum to mB only if 3lo <= B <= 3hi
            let candidates: Vec<u64> = (params.b_min..=params.b_max)
                .filter(|&b| value_range(b).is_some_and(|(lo, hi)| 3 * lo <= b && b <= 3 * hi))
                .collect();
            let &b = candidates.choose(&mut rng).ok_or(infeasible)?;
            let (lo, hi) = value_range(b).expect("filtered");
            let target = params.m as u64 * b;
            for _ in 0..REJECTION_ATTEMPTS {
                let a: Vec<u64> = (0..3 * params.m).map(|_| rng.gen_range(lo..=hi)).collect();
                if a.iter().sum::<u64>() == target {
                    return Ok(ThreePartitionInstance::new(params.m, b, a));
                }
            }
            Err(GenError::GaveUp(REJECTION_ATTEMPTS))
        }
    }
}

/// `greedy / optimal` as an exact fraction in lowest terms. `0/0` stands for
/// two empty coverings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostRatio {
    pub numerator: BigCost,
    pub denominator: BigCost,
}

impl CostRatio {
    pub fn new(numerator: &BigCost, denominator: &BigCost) -> Self {
        let (n, d) = (numerator.to_biguint(), denominator.to_biguint());
        let g = n.gcd(&d);
        if g.bits() == 0 {
            return CostRatio {
                numerator: BigCost::zero(),
                denominator: BigCost::zero(),
            };
        }
        CostRatio {
            numerator: BigCost::from_biguint(&(n / &g)),
            denominator: BigCost::from_biguint(&(d / &g)),
        }
    }

    /// `log₂(numerator / denominator)`; zero for `0/0`.
    pub fn log2(&self) -> f64 {
        match (self.numerator.log2(), self.denominator.log2()) {
            (Some(n), Some(d)) => n - d,
            (None, None) => 0.0,
            (Some(_), None) => f64::INFINITY,
            (None, Some(_)) => f64::NEG_INFINITY,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.log2().exp2()
    }

    pub fn is_at_least_one(&self) -> bool {
        self.numerator >= self.denominator
    }
}

impl fmt::Display for CostRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapMeasurement {
    pub greedy: BigCost,
    pub optimal: BigCost,
    pub ratio: CostRatio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub id: String,
    /// Solver failures are recorded per row.
    pub outcome: Result<GapMeasurement, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapAggregate {
    pub measured: usize,
    pub failed: usize,
    /// Rows where greedy matched the optimum.
    pub greedy_optimal: usize,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub mean_log2_gap: f64,
    pub max_log2_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// `None` when no row was measured.
    pub aggregate: Option<GapAggregate>,
}

fn measure(instance: &OcpInstance, limits: &SolverLimits) -> Result<GapMeasurement, String> {
    let greedy = solve_greedy(instance).map_err(|e| e.to_string())?;
    let exact = solve_exact_dp_with(instance, limits).map_err(|e| e.to_string())?;
    Ok(GapMeasurement {
        ratio: CostRatio::new(&greedy.cost, &exact.cost),
        greedy: greedy.cost,
        optimal: exact.cost,
    })
}

/// Greedy and exact costs per instance. Rows run in parallel and come back
/// in input order.
pub fn run_gap_experiment(batch: &[(String, OcpInstance)], limits: &SolverLimits) -> GapReport {
    let rows: Vec<GapRow> = batch
        .par_iter()
        .map(|(id, inst)| GapRow {
            id: id.clone(),
            outcome: measure(inst, limits),
        })
        .collect();
    GapReport::from_rows(rows)
}

fn aggregate(rows: &[GapRow]) -> Option<GapAggregate> {
    let measured: Vec<&GapMeasurement> = rows.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
    if measured.is_empty() {
        return None;
    }
    let n = measured.len() as f64;
    let logs: Vec<f64> = measured.iter().map(|m| m.ratio.log2()).collect();
    let ratios: Vec<f64> = measured.iter().map(|m| m.ratio.to_f64()).collect();
    Some(GapAggregate {
        measured: measured.len(),
        failed: rows.len() - measured.len(),
        greedy_optimal: measured.iter().filter(|m| m.greedy == m.optimal).count(),
        mean_ratio: ratios.iter().sum::<f64>() / n,
        max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_log2_gap: logs.iter().sum::<f64>() / n,
        max_log2_gap: logs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

impl GapReport {
    /// Report over already measured rows, aggregates recomputed.
    pub fn from_rows(rows: Vec<GapRow>) -> Self {
        let aggregate = aggregate(&rows);
        GapReport { rows, aggregate }
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let id_w = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(8);
        let _ = writeln!(
            out,
            "{:<id_w$}  {:>14}  {:>14}  {:>14}  {:>10}",
            "instance", "greedy", "optimal", "ratio", "log2 gap"
        );
        for row in &self.rows {
            match &row.outcome {
                Ok(m) => {
                    let _ = writeln!(
                        out,
                        "{:<id_w$}  {:>14}  {:>14}  {:>14}  {:>10.6}",
                        row.id,
                        m.greedy.to_string(),
                        m.optimal.to_string(),
                        m.ratio.to_string(),
                        m.ratio.log2()
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "{:<id_w$}  error: {e}", row.id);
                }
            }
        }
        match &self.aggregate {
            Some(a) => {
                let _ = writeln!(
                    out,
                    "measured {} (failed {}), greedy optimal on {}, mean ratio {:.6}, max ratio {:.6}, mean log2 gap {:.6}, max log2 gap {:.6}",
                    a.measured, a.failed, a.greedy_optimal, a.mean_ratio, a.max_ratio, a.mean_log2_gap, a.max_log2_gap
                );
            }
            None => out.push_str("no measured rows; aggregates undefined\n"),
        }
        out
    }

    /// Tab-separated records: `row <id> <greedy> <optimal> <num/den> <log2>`
    /// or `error <id> <message>`, then one `aggregate` line.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            match &row.outcome {
                Ok(m) => {
                    let _ = writeln!(
                        out,
                        "row\t{}\t{}\t{}\t{}\t{}",
                        row.id,
                        m.greedy.to_decimal_string(),
                        m.optimal.to_decimal_string(),
                        m.ratio,
                        m.ratio.log2()
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "error\t{}\t{e}", row.id);
                }
            }
        }
        match &self.aggregate {
            Some(a) => {
                let _ = writeln!(
                    out,
                    "aggregate\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    a.measured, a.failed, a.greedy_optimal, a.mean_ratio, a.max_ratio, a.mean_log2_gap, a.max_log2_gap
                );
            }
            None => out.push_str("aggregate\tundefined\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::io::serialize_instance;
    use crate::reduction::solve_3p_bruteforce;

    #[test]
    fn random_ocp_is_deterministic_and_valid() {
        let mut p = GenParams::new(Family::RandomOcp, 1);
        p.extras = 2;
        let a = serialize_instance(&gen_random_ocp(&p).unwrap());
        let b = serialize_instance(&gen_random_ocp(&p).unwrap());
        assert_eq!(a, b);
        p.seed = 2;
        assert_ne!(a, serialize_instance(&gen_random_ocp(&p).unwrap()));
        for seed in 0..100 {
            p.seed = seed;
            let inst = gen_random_ocp(&p).unwrap();
            assert!(inst.is_coverable());
            assert_eq!(inst.edges().len(), 6);
            assert!(inst.universe().iter().all(|e| (1..=5).contains(&e.weight)));
        }
    }

    #[test]
    fn random_ocp_knob_errors() {
        let mut p = GenParams::new(Family::RandomOcp, 0);
        p.edges = 0;
        assert!(matches!(gen_random_ocp(&p), Err(GenError::Knobs(_))));
        let p = GenParams::new(Family::Planted3p, 0);
        assert!(matches!(gen_random_ocp(&p), Err(GenError::WrongFamily(_))));
    }

    #[test]
    fn planted_instances_are_yes() {
        for seed in 0..50 {
            let mut p = GenParams::new(Family::Planted3p, seed);
            p.b_min = 12;
            p.b_max = 12;
            let tp = gen_random_3p(&p).unwrap();
            assert!(tp.is_valid());
            assert!(solve_3p_bruteforce(&tp).unwrap().is_some());
        }
    }

    #[test]
    fn unconstrained_finds_no_instances() {
        let mut p = GenParams::new(Family::Unconstrained3p, 0);
        p.b_min = 13;
        p.b_max = 13;
        let mut found_no = false;
        for seed in 0..200 {
            p.seed = seed;
            let tp = gen_random_3p(&p).unwrap();
            assert!(tp.is_valid());
            if solve_3p_bruteforce(&tp).unwrap().is_none() {
                found_no = true;
                break;
            }
        }
        assert!(found_no);
    }

    #[test]
    fn infeasible_b_range() {
        // B = 5: values would need 1.25 < a < 2.5, i.e. a = 2, and 2+2+2 != 5
        let mut p = GenParams::new(Family::Planted3p, 0);
        p.b_min = 5;
        p.b_max = 5;
        assert!(matches!(gen_random_3p(&p), Err(GenError::Infeasible { .. })));
    }

    #[test]
    fn gap_on_fixtures() {
        let batch = vec![
            ("testA".to_string(), fixtures::test_a()),
            ("testB".to_string(), fixtures::test_b()),
        ];
        let report = run_gap_experiment(&batch, &SolverLimits::default());
        let a = report.rows[0].outcome.as_ref().unwrap();
        assert_eq!((a.greedy.to_u128(), a.optimal.to_u128()), (Some(592), Some(592)));
        assert_eq!(a.ratio.to_string(), "1/1");
        let b = report.rows[1].outcome.as_ref().unwrap();
        assert_eq!((b.greedy.to_u128(), b.optimal.to_u128()), (Some(336), Some(292)));
        assert_eq!(b.ratio.to_string(), "84/73");
        assert!((b.ratio.to_f64() - 336.0 / 292.0).abs() < 1e-12);
        let agg = report.aggregate.unwrap();
        assert_eq!(agg.greedy_optimal, 1);
        assert!((agg.max_ratio - 336.0 / 292.0).abs() < 1e-12);
    }

    #[test]
    fn empty_batch() {
        let report = run_gap_experiment(&[], &SolverLimits::default());
        assert!(report.rows.is_empty());
        assert!(report.aggregate.is_none());
        assert!(report.to_records().contains("undefined"));
    }
}
