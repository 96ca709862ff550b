use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Cnf, GenError};

pub const PERMANENT_LIMIT: usize = 9;
pub const CLIQUE_LIMIT: usize = 10;
pub const SAT_LIMIT: usize = 20;

/// `sum over permutations s of prod_i A(i, s(i))`, by enumeration.
pub fn permanent_oracle(matrix: &[Vec<u64>]) -> Result<BigUint, GenError> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(GenError::NotSquare);
    }
    if n > PERMANENT_LIMIT {
        return Err(GenError::TooLarge {
            what: "matrix dimension",
            limit: PERMANENT_LIMIT,
        });
    }
    let mut total = BigUint::zero();
    for sigma in (0..n).permutations(n) {
        let mut product = BigUint::one();
        for (i, &j) in sigma.iter().enumerate() {
            product *= matrix[i][j];
        }
        total += product;
    }
    Ok(total)
}

/// Size of a largest clique, by enumerating vertex subsets.
pub fn clique_oracle(adjacency: &[Vec<bool>]) -> Result<usize, GenError> {
    let n = adjacency.len();
    if adjacency.iter().any(|r| r.len() != n) {
        return Err(GenError::NotSquare);
    }
    if n > CLIQUE_LIMIT {
        return Err(GenError::TooLarge {
            what: "vertex count",
            limit: CLIQUE_LIMIT,
        });
    }
    let is_clique =
        |mask: u32| (0..n).all(|i| (i + 1..n).all(|j| mask >> i & 1 == 0 || mask >> j & 1 == 0 || adjacency[i][j]));
    Ok((0..1u32 << n)
        .filter(|&m| is_clique(m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// Number of satisfying assignments, by truth table.
pub fn count_sat_oracle(phi: &Cnf) -> Result<u64, GenError> {
    if phi.num_vars > SAT_LIMIT {
        return Err(GenError::TooLarge {
            what: "variable count",
            limit: SAT_LIMIT,
        });
    }
    Ok((0..1u64 << phi.num_vars).filter(|&a| phi.satisfied_by(a)).count() as u64)
}
