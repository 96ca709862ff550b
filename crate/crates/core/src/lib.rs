//! Weighted tiling systems over bounded-degree graphs.
//!
//! A tiling system assigns each vertex a state so that the local picture
//! around the vertex, its tile, is one of finitely many allowed tiles; the
//! value on a graph is the semiring sum over all such runs of the product
//! of tile weights. Besides exhaustive evaluation the crate evaluates along
//! path and tree decompositions by running a weighted word or tree
//! automaton over a term that builds the graph, in time linear in the graph
//! for fixed width.

pub mod automata;
pub mod decomp;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod semiring;
pub mod term;
pub mod wts;

pub use automata::{eval_pw, eval_tw, tree_eval, EvalOptions, EvalReport, LazyBk};
pub use decomp::{KTreeTerm, KWord, Op, PathDecomposition, TreeDecomposition};
pub use error::{Error, ErrorClass};
pub use graph::{Edge, EdgeName, Graph, Label, Signature, VertexId};
pub use semiring::{Semiring, SemiringId, Weight};
pub use wts::{eval_brute, eval_brute_with, BruteOptions, StateId, Tile, Wts};
