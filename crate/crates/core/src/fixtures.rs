//! The two small instances `testA` and `testB`, embedded verbatim.
//!
//! On `testA` the greedy order `(E4, E3, E2, E1)` is optimal at cost 592.
//! On `testB` the optimum is 292 via `(E4, E3, E2, E1)`, while greedy picks
//! `(E4, E1, E2)` at cost 336.

use thiserror::Error;

use crate::instance::OcpInstance;
use crate::io::parse_instance;

pub const TEST_A: &str = include_str!("../fixtures/testA.ocp");
pub const TEST_B: &str = include_str!("../fixtures/testB.ocp");

pub const NAMES: [&str; 2] = ["testA", "testB"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown fixture {0:?} (known: testA, testB)")]
pub struct UnknownFixture(pub String);

pub fn fixture_text(name: &str) -> Result<&'static str, UnknownFixture> {
    match name {
        "testA" => Ok(TEST_A),
        "testB" => Ok(TEST_B),
        other => Err(UnknownFixture(other.to_string())),
    }
}

pub fn load_fixture(name: &str) -> Result<OcpInstance, UnknownFixture> {
    let text = fixture_text(name)?;
    Ok(parse_instance(text).expect("embedded fixture parses"))
}

pub fn test_a() -> OcpInstance {
    load_fixture("testA").unwrap()
}

pub fn test_b() -> OcpInstance {
    load_fixture("testB").unwrap()
}
