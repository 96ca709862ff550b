use std::collections::HashSet;

use super::tree::binarize;
use super::{
    least_free, validate_tree_decomposition, Color, ColoredGraph, Construction, DecompError, KWord, Op,
    TreeDecomposition, Violation, ViolationKind,
};
use crate::graph::{Edge, EdgeName, Graph, Label, Signature, VertexId};
use crate::term::{RankedTerm, TermBuilder, TermNode};

/// Node symbol of a k-tree-term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KSymbol {
    Op(Op),
    Union,
}

impl From<Op> for KSymbol {
    fn from(op: Op) -> Self {
        KSymbol::Op(op)
    }
}

/// A term with leaves `(i,a)`, unary `Add`/`Forget` nodes and binary `⊕` nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTreeTerm {
    pub k: usize,
    term: RankedTerm<KSymbol>,
}

impl KTreeTerm {
    /// Checks that every symbol sits on a node of matching arity.
    pub fn new(k: usize, term: RankedTerm<KSymbol>) -> Result<Self, DecompError> {
        for (i, node) in term.nodes().iter().enumerate() {
            let ok = matches!(
                node,
                TermNode::Leaf(KSymbol::Op(Op::Node { .. }))
                    | TermNode::Unary(KSymbol::Op(Op::Add { .. } | Op::Forget { .. }), _)
                    | TermNode::Binary(KSymbol::Union, _, _)
            );
            if !ok {
                return Err(DecompError::Arity(i));
            }
        }
        Ok(KTreeTerm { k, term })
    }

    pub fn term(&self) -> &RankedTerm<KSymbol> {
        &self.term
    }

    pub fn len(&self) -> usize {
        self.term.len()
    }

    pub fn is_empty(&self) -> bool {
        self.term.is_empty()
    }

    /// The letters from the leaf up to the root, if the term has no `⊕`.
    pub fn as_kword(&self) -> Option<KWord> {
        let mut ops = Vec::with_capacity(self.len());
        for node in self.term.nodes() {
            match node.symbol() {
                KSymbol::Op(op) => ops.push(*op),
                KSymbol::Union => return None,
            }
        }
        Some(KWord::new(self.k, ops))
    }
}

#[derive(Default)]
struct Frame {
    chi: Vec<Option<usize>>,
    edges: HashSet<(EdgeName, Color, Color)>,
}

/// Bottom-up simulation over leaf elements merged with union-find.
struct TreeSim {
    parent: Vec<usize>,
    labels: Vec<Label>,
    edges: Vec<(EdgeName, usize, usize)>,
    leaf_of: Vec<Option<usize>>,
    root_chi: Vec<Option<usize>>,
}

impl TreeSim {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn run(tau: &KTreeTerm) -> Result<TreeSim, Violation> {
        let k = tau.k;
        let nodes = tau.term.nodes();
        let mut sim = TreeSim {
            parent: Vec::new(),
            labels: Vec::new(),
            edges: Vec::new(),
            leaf_of: vec![None; nodes.len()],
            root_chi: Vec::new(),
        };
        let mut frames: Vec<Option<Frame>> = (0..nodes.len()).map(|_| None).collect();
        let check = |c: Color| -> Result<Color, ViolationKind> {
            if c > k {
                Err(ViolationKind::ColorOutOfRange { color: c, k })
            } else {
                Ok(c)
            }
        };
        for (i, node) in nodes.iter().enumerate() {
            let fail = |kind| Violation { position: i, kind };
            let frame = match node {
                TermNode::Leaf(KSymbol::Op(Op::Node { color, label })) => {
                    let c = check(*color).map_err(fail)?;
                    let x = sim.parent.len();
                    sim.parent.push(x);
                    sim.labels.push(*label);
                    sim.leaf_of[i] = Some(x);
                    let mut chi = vec![None; k + 1];
                    chi[c] = Some(x);
                    Frame {
                        chi,
                        edges: HashSet::new(),
                    }
                }
                TermNode::Unary(KSymbol::Op(op), child) => {
                    let mut f = frames[*child].take().expect("child evaluated first");
                    match *op {
                        Op::Add { name, src, dst } => {
                            for c in [src, dst] {
                                check(c).map_err(fail)?;
                                if f.chi[c].is_none() {
                                    return Err(fail(ViolationKind::ColorInactive(c)));
                                }
                            }
                            if src == dst {
                                return Err(fail(ViolationKind::SameColor(src)));
                            }
                            if !f.edges.insert((name, src, dst)) {
                                return Err(fail(ViolationKind::DuplicateEdge { name, src, dst }));
                            }
                            sim.edges.push((name, f.chi[src].unwrap(), f.chi[dst].unwrap()));
                        }
                        Op::Forget { color } => {
                            check(color).map_err(fail)?;
                            if f.chi[color].take().is_none() {
                                return Err(fail(ViolationKind::ColorInactive(color)));
                            }
                            f.edges.retain(|&(_, s, d)| s != color && d != color);
                        }
                        Op::Node { .. } => unreachable!("arity checked on construction"),
                    }
                    f
                }
                TermNode::Binary(_, l, r) => {
                    let mut left = frames[*l].take().expect("child evaluated first");
                    let right = frames[*r].take().expect("child evaluated first");
                    for c in 0..=k {
                        match (left.chi[c], right.chi[c]) {
                            (Some(a), Some(b)) => {
                                let (ra, rb) = (sim.find(a), sim.find(b));
                                if sim.labels[ra] != sim.labels[rb] {
                                    return Err(fail(ViolationKind::LabelClash(c)));
                                }
                                sim.parent[rb] = ra;
                            }
                            (None, Some(b)) => left.chi[c] = Some(b),
                            _ => {}
                        }
                    }
                    for e in right.edges {
                        if !left.edges.insert(e) {
                            let (name, src, dst) = e;
                            return Err(fail(ViolationKind::UnionDuplicateEdge { name, src, dst }));
                        }
                    }
                    left
                }
                _ => unreachable!("arity checked on construction"),
            };
            frames[i] = Some(frame);
        }
        sim.root_chi = frames[tau.term.root()].take().expect("root evaluated").chi;
        Ok(sim)
    }
}

/// `Ok` if the term is well-formed, otherwise the first violating node.
pub fn is_well_formed_ktt(tau: &KTreeTerm) -> Result<(), Violation> {
    TreeSim::run(tau).map(|_| ())
}

/// The colored graph denoted by a well-formed term. Vertices are numbered in
/// order of their first leaf.
pub fn ktt_semantics(signature: &Signature, tau: &KTreeTerm) -> Result<ColoredGraph, DecompError> {
    let mut sim = TreeSim::run(tau).map_err(DecompError::IllFormed)?;
    let elements = sim.parent.len();
    let mut vertex_of_root = vec![usize::MAX; elements];
    let mut labels = Vec::new();
    let mut vertex = vec![0; elements];
    for x in 0..elements {
        let r = sim.find(x);
        if vertex_of_root[r] == usize::MAX {
            vertex_of_root[r] = labels.len();
            labels.push(sim.labels[r]);
        }
        vertex[x] = vertex_of_root[r];
    }
    let edges: Vec<Edge> = sim
        .edges
        .iter()
        .map(|&(name, s, d)| Edge {
            name,
            src: vertex[s],
            dst: vertex[d],
        })
        .collect();
    let graph = Graph::build(signature.clone(), labels, &edges)?;
    let chi = sim.root_chi.iter().map(|c| c.map(|x| vertex[x])).collect();
    let created = sim.leaf_of.iter().map(|l| l.map(|x| vertex[x])).collect();
    Ok(ColoredGraph { graph, chi, created })
}

/// Term whose semantics is `(G, ∅)`, built bottom-up over the binarized
/// decomposition: each node unions its children with leaves for vertices
/// first seen there, adds the edges assigned to it and forgets vertices
/// missing from its parent.
pub fn ktt_from_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<Construction<KTreeTerm>, DecompError> {
    if g.is_empty() {
        return Err(DecompError::EmptyGraph);
    }
    let k = validate_tree_decomposition(g, td)?;
    let mut td = binarize(td);
    for node in &mut td.nodes {
        node.bag.sort_unstable();
    }
    let parent = td.parents()?;
    let in_bag = |t: usize, v: VertexId| td.nodes[t].bag.binary_search(&v).is_ok();

    // colors, top-down: a vertex keeps its color in every bag
    let mut color: Vec<Option<Color>> = vec![None; g.num_vertices()];
    let mut stack = vec![td.root];
    while let Some(t) = stack.pop() {
        let mut used = vec![false; k + 1];
        for &v in &td.nodes[t].bag {
            if let Some(c) = color[v] {
                used[c] = true;
            }
        }
        for &v in &td.nodes[t].bag {
            if color[v].is_none() {
                let c = least_free(&used).expect("bag size bounds the colors");
                used[c] = true;
                color[v] = Some(c);
            }
        }
        stack.extend(&td.nodes[t].children);
    }
    let color: Vec<Color> = color
        .into_iter()
        .map(|c| c.expect("every vertex is in a bag"))
        .collect();

    // each edge goes to the first node (in id order) holding both endpoints
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for (t, node) in td.nodes.iter().enumerate() {
        for &v in &node.bag {
            occurs[v].push(t);
        }
    }
    let mut assigned: Vec<Vec<Edge>> = vec![Vec::new(); td.nodes.len()];
    for e in g.edges() {
        let t = occurs[e.src]
            .iter()
            .copied()
            .find(|&t| in_bag(t, e.dst))
            .expect("validated coverage");
        assigned[t].push(e);
    }

    let mut b = TermBuilder::new();
    let mut correspondence = Vec::new();
    let mut result = vec![usize::MAX; td.nodes.len()];
    for t in td.post_order() {
        let node = &td.nodes[t];
        let mut parts: Vec<usize> = node.children.iter().map(|&c| result[c]).collect();
        for &v in &node.bag {
            if !node.children.iter().any(|&c| in_bag(c, v)) {
                parts.push(
                    b.leaf(
                        Op::Node {
                            color: color[v],
                            label: g.label(v),
                        }
                        .into(),
                    ),
                );
                correspondence.resize(b.len() - 1, None);
                correspondence.push(Some(v));
            }
        }
        let mut acc = parts[0];
        for &p in &parts[1..] {
            acc = b.binary(KSymbol::Union, acc, p);
        }
        for e in &assigned[t] {
            acc = b.unary(
                Op::Add {
                    name: e.name,
                    src: color[e.src],
                    dst: color[e.dst],
                }
                .into(),
                acc,
            );
        }
        let mut leaving: Vec<Color> = node
            .bag
            .iter()
            .filter(|&&v| parent[t].is_none_or(|p| !in_bag(p, v)))
            .map(|&v| color[v])
            .collect();
        leaving.sort_unstable();
        for c in leaving {
            acc = b.unary(Op::Forget { color: c }.into(), acc);
        }
        result[t] = acc;
    }
    correspondence.resize(b.len(), None);
    let term = KTreeTerm::new(k, b.finish(result[td.root])?)?;
    Ok(Construction { term, correspondence })
}
