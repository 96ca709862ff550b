mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wts_core::decomp::*;
use wts_core::generators::random_instance;
use wts_core::{Graph, Semiring, SemiringId};

fn instance(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance(&mut rng, Semiring::new(SemiringId::Boolean), 10, 1, 3).graph
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn path_decompositions_give_equivalent_kwords(seed in any::<u64>()) {
        let g = instance(seed);
        let (order, _) = heuristic_linear_order(&g);
        let pd = path_decomposition_from_order(&g, &order).unwrap();
        prop_assert_eq!(common::kword_round_trip(&g, &pd), Ok(()));
    }

    #[test]
    fn kwords_give_valid_path_decompositions(seed in any::<u64>(), k in 0usize..4, len in 0usize..40) {
        prop_assert_eq!(common::path_round_trip(&common::random_kword(seed, k, len)), Ok(()));
    }

    #[test]
    fn bounded_orders_give_kwords(seed in any::<u64>()) {
        let g = instance(seed);
        let mut order: Vec<_> = g.vertices().collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(common::order_coherence(&g, &order), Ok(()));
    }

    #[test]
    fn tree_decompositions_give_equivalent_terms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, Semiring::new(SemiringId::Boolean), 10, 1, 3);
        prop_assert_eq!(common::ktt_round_trip(&inst.graph, &inst.tree), Ok(()));
        let td = heuristic_tree_decomposition(&inst.graph, None).unwrap();
        prop_assert_eq!(common::ktt_round_trip(&inst.graph, &td), Ok(()));
    }
}

#[test]
fn seeded_round_trips() {
    for seed in 0..100 {
        assert_eq!(common::decomposition_round_trips(seed), Ok(()), "seed {seed}");
    }
}

#[test]
fn binarized_decompositions_stay_valid() {
    for seed in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, Semiring::new(SemiringId::Boolean), 10, 1, 3);
        let b = binarize(&inst.tree);
        assert!(b.is_binary());
        assert_eq!(
            validate_tree_decomposition(&inst.graph, &b).unwrap(),
            validate_tree_decomposition(&inst.graph, &inst.tree).unwrap()
        );
    }
}
