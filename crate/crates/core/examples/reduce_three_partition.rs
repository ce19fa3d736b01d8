//! 3-Partition to ordered covering and back.
//!
//! A YES instance reduces to a covering instance whose optimum is exactly
//! the budget, and the optimal covering spells out the partition. A NO
//! instance lands above the budget, or has no covering at all.
//!
//! cargo run --example reduce_three_partition

use ocp::reduction::{extract_partition, reduce_3p_to_ocp, solve_3p_bruteforce};
use ocp::solvers::solve_exact_dp_capped;
use ocp::{SolverLimits, ThreePartitionInstance};

fn main() {
    let limits = SolverLimits::generous();
    for tp in [
        ThreePartitionInstance::new(1, 9, vec![3, 3, 3]),
        ThreePartitionInstance::new(2, 15, vec![4, 5, 6, 5, 5, 5]),
        ThreePartitionInstance::new(2, 13, vec![6, 4, 4, 4, 4, 4]),
    ] {
        let red = reduce_3p_to_ocp(&tp).unwrap();
        let p = red.map.params;
        let c = p.budget();
        println!(
            "m = {}, B = {}, a = {:?}: {} triplets, {} edges, w = {}, C = {c}",
            tp.m,
            tp.b,
            tp.a,
            red.map.triplets.len(),
            red.instance.edges().len(),
            p.w
        );
        let oracle = solve_3p_bruteforce(&tp).unwrap();
        if red.map.infeasible {
            println!("  some label lies in no valid triplet: NO (brute force: {oracle:?})\n");
            continue;
        }
        match solve_exact_dp_capped(&red.instance, &limits, &c).unwrap() {
            Some(best) => {
                let part = extract_partition(&red.map, &red.instance, &best.covering).unwrap();
                println!(
                    "  optimum {} via {}",
                    best.cost,
                    red.instance.edge_names(&best.covering).unwrap().join(" ")
                );
                println!("  partition {}", part.canonical());
            }
            None => println!("  optimum exceeds C: NO"),
        }
        println!("  brute force agrees: {}\n", oracle.is_some());
    }
}
