//! (Γ,Σ)-graphs: vertex-labelled graphs with named edges, where every vertex
//! has at most one incoming and one outgoing edge of each name.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub type VertexId = usize;

/// Maximum number of edge names; vertex types are stored as bit sets.
pub const MAX_EDGE_NAMES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("signature has no edge names")]
    EmptyGamma,
    #[error("signature has no node labels")]
    EmptySigma,
    #[error("duplicate name `{0}` in signature")]
    DuplicateName(String),
    #[error("signature has {0} edge names, at most {MAX_EDGE_NAMES} are supported")]
    TooManyNames(usize),
    #[error("unknown edge name `{0}`")]
    UnknownEdgeName(String),
    #[error("unknown node label `{0}`")]
    UnknownLabel(String),
    #[error("edge name index {0} is outside the signature")]
    EdgeNameOutOfRange(usize),
    #[error("label index {0} is outside the signature")]
    LabelOutOfRange(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop on vertex {vertex} with edge name `{name}`")]
    SelfLoop { vertex: VertexId, name: String },
    #[error("duplicate `{name}` edge {src} -> {dst}")]
    DuplicateEdge { name: String, src: VertexId, dst: VertexId },
    #[error("vertex {vertex} has more than one outgoing `{name}` edge")]
    OutDegree { vertex: VertexId, name: String },
    #[error("vertex {vertex} has more than one incoming `{name}` edge")]
    InDegree { vertex: VertexId, name: String },
    #[error("vertex ids must be 0..{expected}, found {found}")]
    NonDenseIds { expected: usize, found: VertexId },
    #[error("label matrix is not {rows}x{cols}")]
    DimensionMismatch { rows: usize, cols: usize },
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeName(pub u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u16);

/// A set of edge names.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NameSet(pub u64);

impl NameSet {
    pub const EMPTY: NameSet = NameSet(0);

    pub fn contains(self, name: EdgeName) -> bool {
        self.0 & (1 << name.0) != 0
    }

    pub fn with(self, name: EdgeName) -> NameSet {
        NameSet(self.0 | (1 << name.0))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = EdgeName> {
        (0..64u8).filter(move |i| self.0 & (1 << i) != 0).map(EdgeName)
    }

    /// All subsets of `0..n` names.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = NameSet> {
        (0..(1u64 << n)).map(NameSet)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexType {
    pub incoming: NameSet,
    pub outgoing: NameSet,
}

/// Ordered edge names Γ and node labels Σ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    gamma: Vec<String>,
    sigma: Vec<String>,
}

impl Signature {
    pub fn new<G, S>(gamma: G, sigma: S) -> Result<Self, GraphError>
    where
        G: IntoIterator,
        G::Item: Into<String>,
        S: IntoIterator,
        S::Item: Into<String>,
    {
        let gamma: Vec<String> = gamma.into_iter().map(Into::into).collect();
        let sigma: Vec<String> = sigma.into_iter().map(Into::into).collect();
        if gamma.is_empty() {
            return Err(GraphError::EmptyGamma);
        }
        if sigma.is_empty() {
            return Err(GraphError::EmptySigma);
        }
        if gamma.len() > MAX_EDGE_NAMES {
            return Err(GraphError::TooManyNames(gamma.len()));
        }
        for names in [&gamma, &sigma] {
            let mut seen = HashSet::new();
            for n in names {
                if !seen.insert(n.as_str()) {
                    return Err(GraphError::DuplicateName(n.clone()));
                }
            }
        }
        Ok(Signature { gamma, sigma })
    }

    pub fn gamma(&self) -> &[String] {
        &self.gamma
    }

    pub fn sigma(&self) -> &[String] {
        &self.sigma
    }

    pub fn edge_names(&self) -> impl Iterator<Item = EdgeName> {
        (0..self.gamma.len() as u8).map(EdgeName)
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (0..self.sigma.len() as u16).map(Label)
    }

    pub fn edge_name(&self, name: &str) -> Result<EdgeName, GraphError> {
        self.gamma
            .iter()
            .position(|g| g == name)
            .map(|i| EdgeName(i as u8))
            .ok_or_else(|| GraphError::UnknownEdgeName(name.to_string()))
    }

    pub fn label(&self, name: &str) -> Result<Label, GraphError> {
        self.sigma
            .iter()
            .position(|s| s == name)
            .map(|i| Label(i as u16))
            .ok_or_else(|| GraphError::UnknownLabel(name.to_string()))
    }

    pub fn edge_name_str(&self, name: EdgeName) -> &str {
        &self.gamma[name.0 as usize]
    }

    pub fn label_str(&self, label: Label) -> &str {
        &self.sigma[label.0 as usize]
    }

    pub fn has_edge_name(&self, name: EdgeName) -> bool {
        (name.0 as usize) < self.gamma.len()
    }

    pub fn has_label(&self, label: Label) -> bool {
        (label.0 as usize) < self.sigma.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub name: EdgeName,
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// A validated (Γ,Σ)-graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    signature: Signature,
    labels: Vec<Label>,
    // [name][vertex]
    succ: Vec<Vec<Option<VertexId>>>,
    pred: Vec<Vec<Option<VertexId>>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("labels", &self.labels)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Validates and builds a graph. Vertex `v` gets `labels[v]`.
    pub fn build(signature: Signature, labels: Vec<Label>, edges: &[Edge]) -> Result<Graph, GraphError> {
        let n = labels.len();
        for &l in &labels {
            if !signature.has_label(l) {
                return Err(GraphError::LabelOutOfRange(l.0 as usize));
            }
        }
        let names = signature.gamma.len();
        let mut succ = vec![vec![None; n]; names];
        let mut pred = vec![vec![None; n]; names];
        for e in edges {
            if !signature.has_edge_name(e.name) {
                return Err(GraphError::EdgeNameOutOfRange(e.name.0 as usize));
            }
            for v in [e.src, e.dst] {
                if v >= n {
                    return Err(GraphError::UnknownVertex(v));
                }
            }
            let name = || signature.edge_name_str(e.name).to_string();
            if e.src == e.dst {
                return Err(GraphError::SelfLoop {
                    vertex: e.src,
                    name: name(),
                });
            }
            let g = e.name.0 as usize;
            match succ[g][e.src] {
                Some(d) if d == e.dst => {
                    return Err(GraphError::DuplicateEdge {
                        name: name(),
                        src: e.src,
                        dst: e.dst,
                    })
                }
                Some(_) => {
                    return Err(GraphError::OutDegree {
                        vertex: e.src,
                        name: name(),
                    })
                }
                None => {}
            }
            if pred[g][e.dst].is_some() {
                return Err(GraphError::InDegree {
                    vertex: e.dst,
                    name: name(),
                });
            }
            succ[g][e.src] = Some(e.dst);
            pred[g][e.dst] = Some(e.src);
        }
        Ok(Graph {
            signature,
            labels,
            succ,
            pred,
        })
    }

    pub fn empty(signature: Signature) -> Graph {
        Graph::build(signature, Vec::new(), &[]).expect("empty graph is valid")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(|row| row.iter().flatten().count()).sum()
    }

    /// Edges ordered by name, then source vertex.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.succ.iter().enumerate().flat_map(|(g, row)| {
            row.iter().enumerate().filter_map(move |(src, dst)| {
                dst.map(|dst| Edge {
                    name: EdgeName(g as u8),
                    src,
                    dst,
                })
            })
        })
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.succ
            .get(e.name.0 as usize)
            .and_then(|row| row.get(e.src))
            .is_some_and(|d| *d == Some(e.dst))
    }

    /// The unique neighbour of `v` along `name` in the given direction.
    pub fn edge_endpoint(&self, v: VertexId, name: EdgeName, dir: Direction) -> Result<Option<VertexId>, GraphError> {
        if v >= self.num_vertices() {
            return Err(GraphError::UnknownVertex(v));
        }
        if !self.signature.has_edge_name(name) {
            return Err(GraphError::EdgeNameOutOfRange(name.0 as usize));
        }
        Ok(self.neighbor(v, name, dir))
    }

    /// Unchecked variant of [`Graph::edge_endpoint`].
    pub fn neighbor(&self, v: VertexId, name: EdgeName, dir: Direction) -> Option<VertexId> {
        let g = name.0 as usize;
        match dir {
            Direction::Out => self.succ[g][v],
            Direction::In => self.pred[g][v],
        }
    }

    pub fn vertex_type(&self, v: VertexId) -> Result<VertexType, GraphError> {
        if v >= self.num_vertices() {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.type_of(v))
    }

    pub(crate) fn type_of(&self, v: VertexId) -> VertexType {
        let mut t = VertexType::default();
        for name in self.signature.edge_names() {
            if self.neighbor(v, name, Direction::In).is_some() {
                t.incoming = t.incoming.with(name);
            }
            if self.neighbor(v, name, Direction::Out).is_some() {
                t.outgoing = t.outgoing.with(name);
            }
        }
        t
    }

    /// Neighbours of `v` regardless of name and direction, deduplicated and sorted.
    pub fn undirected_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .succ
            .iter()
            .chain(self.pred.iter())
            .filter_map(|row| row[v])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Undirected simple adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        self.vertices().map(|v| self.undirected_neighbors(v)).collect()
    }
}

pub const RIGHT: &str = "right";
pub const DOWN: &str = "down";

/// The signature used by every grid encoding: Γ = {right, down}.
pub fn grid_signature<S: Into<String>>(sigma: impl IntoIterator<Item = S>) -> Result<Signature, GraphError> {
    Signature::new([RIGHT, DOWN], sigma)
}

/// An `m x n` grid with `right` edges (i,j)->(i,j+1) and `down` edges
/// (i,j)->(i+1,j). Vertex (i,j) has id `i * n + j`.
pub fn grid_graph(sigma: &[&str], labels: &[Vec<Label>]) -> Result<Graph, GraphError> {
    let rows = labels.len();
    let cols = labels.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || labels.iter().any(|r| r.len() != cols) {
        return Err(GraphError::DimensionMismatch { rows, cols });
    }
    let sig = grid_signature(sigma.iter().copied())?;
    let right = EdgeName(0);
    let down = EdgeName(1);
    let id = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push(Edge {
                    name: right,
                    src: id(i, j),
                    dst: id(i, j + 1),
                });
            }
            if i + 1 < rows {
                edges.push(Edge {
                    name: down,
                    src: id(i, j),
                    dst: id(i + 1, j),
                });
            }
        }
    }
    Graph::build(sig, labels.concat(), &edges)
}

/// Grid over Σ = {0, 1} from a boolean matrix.
pub fn boolean_grid(matrix: &[Vec<bool>]) -> Result<Graph, GraphError> {
    let labels: Vec<Vec<Label>> = matrix
        .iter()
        .map(|row| row.iter().map(|&b| Label(b as u16)).collect())
        .collect();
    grid_graph(&["0", "1"], &labels)
}

/// Vertex id of cell (i, j), i <= j, in [`triangular_grid`] over `n` vertices.
pub fn triangular_id(n: usize, i: usize, j: usize) -> VertexId {
    debug_assert!(i <= j && j < n);
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// The triangular adjacency grid of an undirected graph on `n` vertices.
///
/// Cells are (i, j) with i <= j; the diagonal cell (i, i) stands for vertex i
/// and is labelled 1, cell (i, j) with i < j is labelled by `adjacency[i][j]`.
/// The row of i runs rightwards from its diagonal cell, `right` edges
/// (i,j)->(i,j+1); the column of j runs from its diagonal cell towards row 0,
/// `down` edges (i+1,j)->(i,j). Every off-diagonal cell therefore has both an
/// incoming `right` and an incoming `down` edge.
pub fn triangular_grid(adjacency: &[Vec<bool>]) -> Result<Graph, GraphError> {
    let n = adjacency.len();
    if n == 0 || adjacency.iter().any(|r| r.len() != n) {
        return Err(GraphError::DimensionMismatch { rows: n, cols: n });
    }
    for i in 0..n {
        for j in 0..n {
            if adjacency[i][j] != adjacency[j][i] {
                return Err(GraphError::NotSymmetric(i, j));
            }
        }
    }
    let sig = grid_signature(["0", "1"])?;
    let id = |i, j| triangular_id(n, i, j);
    let mut labels = Vec::with_capacity(n * (n + 1) / 2);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            debug_assert_eq!(id(i, j), labels.len());
            labels.push(Label((i == j || adjacency[i][j]) as u16));
            if j + 1 < n {
                edges.push(Edge {
                    name: EdgeName(0),
                    src: id(i, j),
                    dst: id(i, j + 1),
                });
            }
            if i < j {
                edges.push(Edge {
                    name: EdgeName(1),
                    src: id(i + 1, j),
                    dst: id(i, j),
                });
            }
        }
    }
    Graph::build(sig, labels, &edges)
}
