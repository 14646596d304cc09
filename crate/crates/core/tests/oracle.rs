mod common;

use common::{normalize, random_ideal, rank_mod_p, taylor_tor};
use polar_koszul::koszul::{homology_dimensions, DepthOptions};
use polar_koszul::{CoefficientModule, PrimeField};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[test]
fn taylor_oracle_on_two_generators() {
    // (x1^2 x2, x1 x2^2): Tor_0 at 1, Tor_1 at both generators, Tor_2 at the lcm
    let t = taylor_tor(&[vec![2, 1], vec![1, 2]], 2, 32003);
    assert_eq!(t.len(), 4);
    assert_eq!(t[&vec![0, 0]], vec![1]);
    assert_eq!(t[&vec![2, 1]], vec![0, 1]);
    assert_eq!(t[&vec![2, 2]], vec![0, 0, 1]);
}

#[test]
fn taylor_oracle_cancels_non_minimal_faces() {
    // (x1, x2, x1 x2 x3) is not minimal as a set; the Taylor complex still
    // resolves S/(x1, x2), so only the Koszul degrees survive
    let t = taylor_tor(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1]], 3, 32003);
    let degrees: Vec<&Vec<u16>> = t.keys().collect();
    assert_eq!(
        degrees,
        vec![
            &vec![0, 0, 0],
            &vec![0, 1, 0],
            &vec![1, 0, 0],
            &vec![1, 1, 0]
        ]
    );
}

#[test]
fn rank_oracle_small_cases() {
    assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], 7), 1);
    assert_eq!(rank_mod_p(vec![vec![1, 1], vec![1, -1]], 2), 1);
    assert_eq!(rank_mod_p(vec![vec![1, 1], vec![1, -1]], 3), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn strands_match_taylor(seed in any::<u64>(), nvars in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_ideal(&mut rng, nvars, 3, 5);
        let field = PrimeField::new(32003).unwrap();
        let module = CoefficientModule::Quotient(Arc::new(i.clone()));
        let strands = homology_dimensions(&module, nvars, &field, &DepthOptions::default()).unwrap();
        let oracle = taylor_tor(&common::exponents(&i), nvars, 32003);
        prop_assert_eq!(normalize(strands), oracle, "{}", i);
    }
}
