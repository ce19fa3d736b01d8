//! Reading and writing the text formats.
//!
//! cargo run --example instance_files

use ocp::io::{
    parse_covering, parse_instance, serialize_covering, serialize_instance, CoveringDocument,
};
use ocp::solvers::solve_exact_dp;

const TEXT: &str = "\
ocp 1
# two labels, one auxiliary token
label s1 3
label s2 2
extra t 1
edge E1 s1 t
edge E2 s2
edge E3 s1 s2
budget 40
";

fn main() {
    let inst = parse_instance(TEXT).unwrap();
    // the canonical form writes budgets as exponent lists
    print!("{}", serialize_instance(&inst));

    let best = solve_exact_dp(&inst).unwrap();
    let doc = CoveringDocument::from_covering(&inst, &best.covering, Some("example".into())).unwrap();
    let text = serialize_covering(&doc);
    println!("\n{text}cost {}", best.cost);
    assert_eq!(parse_covering(&text).unwrap(), doc);

    match parse_instance("ocp 1\nlabel s1 0\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nrejected: {e}"),
    }
}
