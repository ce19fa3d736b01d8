//! Every solver on the two built-in instances. Greedy falls short on testB.
//!
//! cargo run --example solve_fixtures

use ocp::{fixtures, solve, Method, SolverLimits};

fn main() {
    let limits = SolverLimits::default();
    for name in fixtures::NAMES {
        let inst = fixtures::load_fixture(name).unwrap();
        println!("{name}");
        for method in Method::ALL {
            let r = solve(&inst, method, &limits).unwrap();
            println!(
                "  {method:<6} {:>5}  {:<12} expanded {:>3}{}",
                r.cost.to_string(),
                inst.edge_names(&r.covering).unwrap().join(" "),
                r.stats.expanded,
                if r.optimal { "" } else { "  (heuristic)" }
            );
        }
    }
}
