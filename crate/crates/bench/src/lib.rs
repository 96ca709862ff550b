//! Seeded benchmark inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wts_core::generators::{clique_wts, cnf_to_grid, permanent_wts, random_adjacency, random_cnf, sharp_sat_wts};
use wts_core::graph::{boolean_grid, triangular_grid};
use wts_core::{Graph, Wts};

/// Model counting on a 3 x `n` grid: three variables, `n` clauses.
pub fn sat_strip(n: usize, seed: u64) -> (Wts, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = random_cnf(&mut rng, 3, n, 2);
    (sharp_sat_wts(), cnf_to_grid(&phi).expect("nonempty formula"))
}

/// The permanent of the all-ones `n x n` matrix.
pub fn all_ones_permanent(n: usize) -> (Wts, Graph) {
    (
        permanent_wts(),
        boolean_grid(&vec![vec![true; n]; n]).expect("square matrix"),
    )
}

/// Clique number of a G(n, 1/2) graph.
pub fn random_clique(n: usize, seed: u64) -> (Wts, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        clique_wts(),
        triangular_grid(&random_adjacency(&mut rng, n, 0.5)).expect("symmetric"),
    )
}
