//! Tiling systems and graph encodings for concrete counting and optimization
//! problems, brute-force reference oracles, and seeded random instances.

mod binary;
mod clique;
mod cnf;
mod oracles;
mod permanent;
mod random;
mod sat;

use thiserror::Error;

use crate::graph::{EdgeName, GraphError, NameSet, Signature, VertexType};
use crate::semiring::Weight;
use crate::wts::{NameMap, StateId, Tile, WtsError};

pub use binary::{binary_path_wts, nat_to_bits, nat_to_path_graph};
pub use clique::clique_wts;
pub use cnf::{parse_dimacs, Cnf};
pub use oracles::{clique_oracle, count_sat_oracle, permanent_oracle};
pub use permanent::{natural_permanent_encoding, permanent_wts};
pub use random::{
    random_adjacency, random_bits, random_cnf, random_instance, random_matrix, random_wts_for_graph, RandomInstance,
};
pub use sat::{cnf_to_grid, gap_encoding, gap_wts, sharp_sat_wts};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Wts(#[from] WtsError),
    #[error("empty bit string")]
    EmptyBits,
    #[error("invalid bit `{0}`")]
    BadBit(char),
    #[error("clause {clause} contains variable {var} both positively and negatively")]
    Tautology { clause: usize, var: usize },
    #[error("formula needs at least one variable and one clause")]
    EmptyFormula,
    #[error("formulas have {0} and {1} variables")]
    VariableMismatch(usize, usize),
    #[error("DIMACS line {line}: {reason}")]
    Dimacs { line: usize, reason: String },
    #[error("{what} exceeds the oracle limit of {limit}")]
    TooLarge { what: &'static str, limit: usize },
    #[error("matrix is not square")]
    NotSquare,
}

/// Every total map from the names in `set` to states `0..num_states`.
pub(crate) fn maps_over(set: NameSet, num_states: usize) -> Vec<NameMap> {
    let mut maps = vec![NameMap::new()];
    for name in set.iter() {
        maps = maps
            .iter()
            .flat_map(|m| (0..num_states).map(move |q| m.with(name, StateId(q as u16))))
            .collect();
    }
    maps
}

/// All vertex types over the given names.
pub(crate) fn all_types(names: &[EdgeName]) -> Vec<VertexType> {
    let subsets: Vec<NameSet> = (0..1u32 << names.len())
        .map(|mask| {
            names
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(NameSet::EMPTY, |s, (_, &n)| s.with(n))
        })
        .collect();
    subsets
        .iter()
        .flat_map(|&incoming| subsets.iter().map(move |&outgoing| VertexType { incoming, outgoing }))
        .collect()
}

/// Lists every tile of the given types that `rule` assigns a weight to.
pub(crate) fn enumerate_tiles(
    sig: &Signature,
    num_states: usize,
    types: &[VertexType],
    mut rule: impl FnMut(&Tile) -> Option<Weight>,
) -> Vec<(Tile, Weight)> {
    let mut tiles = Vec::new();
    for ty in types {
        let ins = maps_over(ty.incoming, num_states);
        let outs = maps_over(ty.outgoing, num_states);
        for label in sig.labels() {
            for q in 0..num_states {
                for f_in in &ins {
                    for f_out in &outs {
                        let tile = Tile::new(f_in.clone(), StateId(q as u16), label, f_out.clone());
                        if let Some(w) = rule(&tile) {
                            tiles.push((tile, w));
                        }
                    }
                }
            }
        }
    }
    tiles
}
