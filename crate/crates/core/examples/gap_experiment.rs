//! Greedy against the exact optimum on a seeded batch.
//!
//! cargo run --release --example gap_experiment -- [count] [seed]

use ocp::harness::{gen_random_ocp, run_gap_experiment, Family, GenParams};
use ocp::SolverLimits;

fn main() {
    let mut args = std::env::args().skip(1);
    let count: u64 = args.next().map_or(40, |s| s.parse().expect("count"));
    let base: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let batch: Vec<_> = (base..base + count)
        .map(|seed| {
            let mut p = GenParams::new(Family::RandomOcp, seed);
            p.labels = 10;
            p.edges = 8;
            p.max_weight = 8;
            p.max_edge_size = 4;
            (format!("seed-{seed}"), gen_random_ocp(&p).unwrap())
        })
        .collect();
    let report = run_gap_experiment(&batch, &SolverLimits::default());
    print!("{}", report.to_table());
}
