//! Residual trace of a covering: what each step covers first and what it pays.
//!
//! cargo run --example evaluate_covering

use ocp::fixtures;
use ocp::{covering_cost, residual_trace};

fn main() {
    let inst = fixtures::test_b();
    for order in [["E4", "E3", "E2", "E1"], ["E1", "E2", "E3", "E4"]] {
        let cov = inst.covering(&order).expect("fixture edge ids");
        let trace = residual_trace(&inst, &cov).expect("valid covering");
        println!("{}", order.join(" -> "));
        for step in &trace.steps {
            let names: Vec<&str> = step
                .residual
                .iter()
                .map(|&x| inst.element(x).name.as_str())
                .collect();
            println!(
                "  {:<3} U = {{{}}}  u = {}  pays {}",
                inst.edges()[step.edge.0].name,
                names.join(", "),
                step.weight,
                step.cost
            );
        }
        let total = covering_cost(&inst, &cov).unwrap();
        println!("  total {} = {}\n", total, total.to_power_string());
    }
}
