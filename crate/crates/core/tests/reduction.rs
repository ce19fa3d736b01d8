mod common;

use proptest::prelude::*;

use ocp::harness::{gen_random_3p, Family, GenParams};
use ocp::io::{parse_instance, parse_map, serialize_instance, serialize_map};
use ocp::reduction::{
    canonical_covering, extract_partition, reduce_3p_to_ocp, solve_3p_bruteforce, ReductionError,
};
use ocp::solvers::{solve_exact_dp_capped, solve_exact_dp_with};
use ocp::{covering_cost, verify_certificate, BigCost, SolverLimits, ThreePartitionInstance};

#[test]
fn single_bin_parameters() {
    let tp = ThreePartitionInstance::new(1, 9, vec![3, 3, 3]);
    let red = reduce_3p_to_ocp(&tp).unwrap();
    assert_eq!((red.map.params.t, red.map.params.w), (1, 11));
    assert_eq!(red.map.params.budget().to_u128(), Some(3072));
    assert_eq!(red.map.triplets, vec![[0, 1, 2]]);
    assert_eq!(red.instance.edges().len(), 2);
    let best = solve_exact_dp_with(&red.instance, &SolverLimits::generous()).unwrap();
    assert_eq!(best.cost.to_u128(), Some(3072));
    assert_eq!(common::names(&red.instance, &best.covering), ["A_1_1", "E_1_1"]);
}

#[test]
fn two_bins_of_equal_values() {
    let tp = ThreePartitionInstance::new(2, 12, vec![4; 6]);
    let red = reduce_3p_to_ocp(&tp).unwrap();
    assert_eq!(red.map.triplets.len(), 20);
    assert_eq!(red.instance.edges().len(), 80);
    assert_eq!(red.map.params.w, 15);
    assert_eq!(red.map.params.budget(), BigCost::from_exponents([16, 14]));
    // 6 labels plus an opening and a closing token per (bin, triplet)
    assert_eq!(red.instance.universe_size(), 6 + 80);
}

#[test]
fn no_instance_has_no_triplets() {
    let tp = ThreePartitionInstance::new(2, 13, vec![6, 4, 4, 4, 4, 4]);
    let red = reduce_3p_to_ocp(&tp).unwrap();
    assert!(red.map.triplets.is_empty());
    assert!(red.map.infeasible);
    assert!(!red.instance.is_coverable());
    let text = serialize_instance(&red.instance);
    assert!(text.contains("\nuncoverable\n"));
    assert_eq!(parse_instance(&text).unwrap(), red.instance);
}

#[test]
fn invalid_sources_are_refused() {
    for tp in [
        ThreePartitionInstance::new(1, 9, vec![2, 3, 4]),
        ThreePartitionInstance::new(1, 9, vec![3, 3]),
        ThreePartitionInstance::new(0, 9, vec![]),
        ThreePartitionInstance::new(1, 9, vec![3, 3, 4]),
    ] {
        assert!(matches!(reduce_3p_to_ocp(&tp), Err(ReductionError::Invalid(_))), "{tp:?}");
    }
}

#[test]
fn exhaustive_small_instances_match_brute_force() {
    let limits = SolverLimits::generous();
    let suite = common::exhaustive_suite(&[1], 15);
    assert!(!suite.is_empty());
    for tp in suite {
        let red = reduce_3p_to_ocp(&tp).unwrap();
        let c = red.map.params.budget();
        let yes = !red.map.infeasible
            && solve_exact_dp_capped(&red.instance, &limits, &c)
                .unwrap()
                .is_some();
        assert_eq!(yes, solve_3p_bruteforce(&tp).unwrap().is_some(), "{tp:?}");
    }
}

#[test]
fn tampered_map_is_rejected() {
    let tp = ThreePartitionInstance::new(2, 15, vec![4, 5, 6, 5, 5, 5]);
    let red = reduce_3p_to_ocp(&tp).unwrap();
    let text = serialize_map(&red.map);
    let tampered = text.replacen("edge A_1_1 opening", "edge A_1_1 assignment", 1);
    assert_ne!(tampered, text);
    assert!(parse_map(&tampered).is_err());
}

fn planted(seed: u64, m: usize) -> ThreePartitionInstance {
    let mut p = GenParams::new(Family::Planted3p, seed);
    p.m = m;
    p.b_min = 9;
    p.b_max = 24;
    gen_random_3p(&p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_canonical_covering_costs_the_budget(seed in any::<u64>(), m in 1usize..=3) {
        let tp = planted(seed, m);
        let red = reduce_3p_to_ocp(&tp).unwrap();
        let partition = solve_3p_bruteforce(&tp).unwrap().expect("planted");
        let cov = canonical_covering(&tp, &partition, &red.map).unwrap();
        prop_assert_eq!(covering_cost(&red.instance, &cov).unwrap(), red.map.params.budget());
        prop_assert!(verify_certificate(&red.instance, &cov).unwrap().accepted);
        prop_assert!(common::structure_violations(&red.map, &red.instance, &cov).is_empty());
        let back = extract_partition(&red.map, &red.instance, &cov).unwrap();
        prop_assert_eq!(back.canonical(), partition.canonical());
    }

    #[test]
    fn reduction_is_deterministic_and_round_trips(seed in any::<u64>(), m in 1usize..=3) {
        let tp = planted(seed, m);
        let (a, b) = (reduce_3p_to_ocp(&tp).unwrap(), reduce_3p_to_ocp(&tp).unwrap());
        let text = serialize_instance(&a.instance);
        prop_assert_eq!(&text, &serialize_instance(&b.instance));
        prop_assert_eq!(serialize_map(&a.map), serialize_map(&b.map));
        prop_assert_eq!(parse_instance(&text).unwrap(), a.instance.clone());
        prop_assert_eq!(parse_map(&serialize_map(&a.map)).unwrap(), a.map.clone());
        prop_assert_eq!(a.instance.edges().len(), 2 * m * a.map.triplets.len());
    }

    #[test]
    fn dropping_an_opening_breaks_feasibility(seed in any::<u64>(), m in 1usize..=3, which in 0usize..3) {
        let tp = planted(seed, m);
        let red = reduce_3p_to_ocp(&tp).unwrap();
        let partition = solve_3p_bruteforce(&tp).unwrap().expect("planted");
        let mut cov = canonical_covering(&tp, &partition, &red.map).unwrap();
        // even positions hold the openings
        cov.sequence.remove(2 * (which % m));
        prop_assert!(!verify_certificate(&red.instance, &cov).unwrap().accepted);
    }
}
