//! Exact costs as sums of powers of two.
//!
//! cargo run --example big_costs

use ocp::BigCost;

fn main() {
    let a = BigCost::from_exponents([8, 5, 2]);
    let b: BigCost = [8, 6, 4, 4].into_iter().map(BigCost::pow2).sum();
    println!("{a} vs {b}: {:?}", a.cmp(&b));

    let huge = BigCost::pow2(1500) + BigCost::pow2(3);
    println!("{huge}");
    println!("log2 ~ {:.3}, {} decimal digits", huge.log2().unwrap(), huge.to_decimal_string().len());
    assert!(huge > BigCost::pow2(1500));
    assert_eq!(BigCost::parse_decimal(&huge.to_decimal_string()).unwrap(), huge);
}
