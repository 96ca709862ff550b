//! Path and tree decompositions, k-words, k-tree-terms and the constructions
//! that turn one into the other.

mod heuristic;
mod ktt;
mod kword;
mod path;
mod tree;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{Edge, EdgeName, Graph, GraphError, Label, VertexId};
use crate::term::TermError;

pub use heuristic::{heuristic_linear_order, linear_order_candidates, min_fill_order};
pub use ktt::{is_well_formed_ktt, ktt_from_tree_decomposition, ktt_semantics, KSymbol, KTreeTerm};
pub use kword::{
    is_well_formed_kword, kword_from_linearization, kword_from_linearization_with, kword_from_path_decomposition,
    kword_semantics, path_decomposition_from_kword, KWord,
};
pub use path::{
    check_k_bounded, linearization_width, path_decomposition_from_order, validate_path_decomposition, PathDecomposition,
};
pub use tree::{binarize, heuristic_tree_decomposition, validate_tree_decomposition, TdNode, TreeDecomposition};

/// Colors are drawn from `0..=k`.
pub type Color = usize;

/// A letter of the alphabet Ω_k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// Create a fresh vertex with the given label and color.
    Node { color: Color, label: Label },
    /// Add a `name`-edge from the vertex colored `src` to the one colored `dst`.
    Add { name: EdgeName, src: Color, dst: Color },
    /// Uncolor the vertex colored `color`.
    Forget { color: Color },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    ColorOutOfRange { color: Color, k: usize },
    ColorActive(Color),
    ColorInactive(Color),
    SameColor(Color),
    DuplicateEdge { name: EdgeName, src: Color, dst: Color },
    LabelClash(Color),
    UnionDuplicateEdge { name: EdgeName, src: Color, dst: Color },
}

/// First well-formedness violation. For k-words `position` is the 1-based
/// index of the offending letter; for k-TTs it is the arena node index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub position: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: ", self.position)?;
        match &self.kind {
            ViolationKind::ColorOutOfRange { color, k } => write!(f, "color {color} exceeds bound {k}"),
            ViolationKind::ColorActive(c) => write!(f, "color {c} is already active"),
            ViolationKind::ColorInactive(c) => write!(f, "color {c} is not active"),
            ViolationKind::SameColor(c) => write!(f, "edge from color {c} to itself"),
            ViolationKind::DuplicateEdge { name, src, dst } => {
                write!(f, "edge {}:{src}->{dst} was already added", name.0)
            }
            ViolationKind::LabelClash(c) => write!(f, "operands disagree on the label of color {c}"),
            ViolationKind::UnionDuplicateEdge { name, src, dst } => {
                write!(f, "edge {}:{src}->{dst} is added in both operands", name.0)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("ill-formed term {0}")]
    IllFormed(Violation),
    #[error("decomposition has no bags")]
    NoBags,
    #[error("bag {0} is empty")]
    EmptyBag(usize),
    #[error("bag {bag} mentions unknown vertex {vertex}")]
    UnknownVertex { bag: usize, vertex: VertexId },
    #[error("bag {bag} lists vertex {vertex} twice")]
    DuplicateInBag { bag: usize, vertex: VertexId },
    #[error("vertex {0} occurs in no bag")]
    MissingVertex(VertexId),
    #[error("edge {src} -> {dst} is not covered by any bag")]
    UncoveredEdge { src: VertexId, dst: VertexId },
    #[error("vertex {vertex} occurs in bags {before} and {after} but not in bag {gap}")]
    PathGap {
        vertex: VertexId,
        before: usize,
        gap: usize,
        after: usize,
    },
    #[error("bags containing vertex {vertex} are disconnected (nodes {first} and {second})")]
    TreeGap {
        vertex: VertexId,
        first: usize,
        second: usize,
    },
    #[error("root {0} is not a node")]
    BadRoot(usize),
    #[error("node {node} has unknown child {child}")]
    UnknownChild { node: usize, child: usize },
    #[error("node {0} has more than one parent")]
    MultipleParents(usize),
    #[error("node {0} is not reachable from the root")]
    Unreachable(usize),
    #[error("decomposition width {width} exceeds the limit {limit}")]
    WidthExceeded { width: usize, limit: usize },
    #[error("order is not a permutation of the vertices")]
    NotPermutation,
    #[error("vertex order needs more than {k} + 1 colors at position {position}")]
    ColorsExhausted { position: usize, k: usize },
    #[error("node {0} has the wrong number of children for its symbol")]
    Arity(usize),
    #[error("empty graph has no tree term")]
    EmptyGraph,
}

/// The semantics of a term: a graph with a partial coloring `chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    pub graph: Graph,
    /// `chi[i]` is the vertex colored `i`, if any.
    pub chi: Vec<Option<VertexId>>,
    /// `created[p]` is the vertex created by the letter or leaf at `p`.
    pub created: Vec<Option<VertexId>>,
}

impl ColoredGraph {
    pub fn active_colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.chi.iter().enumerate().filter_map(|(i, v)| v.map(|_| i))
    }

    pub fn has_active_colors(&self) -> bool {
        self.chi.iter().any(Option::is_some)
    }
}

/// A term produced from a graph together with the graph vertex behind each
/// node-creating position.
#[derive(Clone, Debug)]
pub struct Construction<T> {
    pub term: T,
    pub correspondence: Vec<Option<VertexId>>,
}

/// Checks that `correspondence` induces an isomorphism from the semantics of
/// a term onto `g`.
pub fn verify_correspondence(g: &Graph, cg: &ColoredGraph, correspondence: &[Option<VertexId>]) -> bool {
    let n = cg.graph.num_vertices();
    if n != g.num_vertices() || cg.created.len() != correspondence.len() {
        return false;
    }
    let mut map: Vec<Option<VertexId>> = vec![None; n];
    for (created, target) in cg.created.iter().zip(correspondence) {
        match (created, target) {
            (Some(s), Some(v)) => match map[*s] {
                Some(w) if w != *v => return false,
                _ => map[*s] = Some(*v),
            },
            (None, None) => {}
            _ => return false,
        }
    }
    let Some(map) = map.into_iter().collect::<Option<Vec<_>>>() else {
        return false;
    };
    let image: HashSet<_> = map.iter().copied().collect();
    if image.len() != n || map.iter().any(|&v| v >= n) {
        return false;
    }
    if (0..n).any(|s| cg.graph.label(s) != g.label(map[s])) {
        return false;
    }
    if cg.graph.num_edges() != g.num_edges() {
        return false;
    }
    cg.graph.edges().all(|e| {
        g.has_edge(Edge {
            name: e.name,
            src: map[e.src],
            dst: map[e.dst],
        })
    })
}

/// Least color in `0..=k` not marked used.
fn least_free(used: &[bool]) -> Option<Color> {
    used.iter().position(|u| !u)
}
