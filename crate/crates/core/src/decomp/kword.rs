use std::collections::HashSet;

use super::path::{last_neighbor, positions};
use super::{
    least_free, validate_path_decomposition, Color, ColoredGraph, Construction, DecompError, Op, PathDecomposition,
    Violation, ViolationKind,
};
use crate::graph::{Direction, Edge, Graph, Label, Signature, VertexId};

/// A word over Ω_k.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KWord {
    pub k: usize,
    pub ops: Vec<Op>,
}

impl KWord {
    pub fn new(k: usize, ops: Vec<Op>) -> Self {
        KWord { k, ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Left-to-right simulation of a k-word.
struct WordSim {
    k: usize,
    chi: Vec<Option<VertexId>>,
    labels: Vec<Label>,
    edges: Vec<Edge>,
    seen: HashSet<Edge>,
    created: Vec<Option<VertexId>>,
}

impl WordSim {
    fn new(k: usize) -> Self {
        WordSim {
            k,
            chi: vec![None; k + 1],
            labels: Vec::new(),
            edges: Vec::new(),
            seen: HashSet::new(),
            created: Vec::new(),
        }
    }

    fn color(&self, c: Color) -> Result<Option<VertexId>, ViolationKind> {
        if c > self.k {
            return Err(ViolationKind::ColorOutOfRange { color: c, k: self.k });
        }
        Ok(self.chi[c])
    }

    fn active(&self, c: Color) -> Result<VertexId, ViolationKind> {
        self.color(c)?.ok_or(ViolationKind::ColorInactive(c))
    }

    fn step(&mut self, op: &Op) -> Result<(), ViolationKind> {
        let mut created = None;
        match *op {
            Op::Node { color, label } => {
                if self.color(color)?.is_some() {
                    return Err(ViolationKind::ColorActive(color));
                }
                let v = self.labels.len();
                self.labels.push(label);
                self.chi[color] = Some(v);
                created = Some(v);
            }
            Op::Add { name, src, dst } => {
                let s = self.active(src)?;
                let d = self.active(dst)?;
                if src == dst {
                    return Err(ViolationKind::SameColor(src));
                }
                let e = Edge { name, src: s, dst: d };
                if !self.seen.insert(e) {
                    return Err(ViolationKind::DuplicateEdge { name, src, dst });
                }
                self.edges.push(e);
            }
            Op::Forget { color } => {
                self.active(color)?;
                self.chi[color] = None;
            }
        }
        self.created.push(created);
        Ok(())
    }

    fn run<'a>(
        k: usize,
        ops: impl IntoIterator<Item = &'a Op>,
        mut after: impl FnMut(&WordSim),
    ) -> Result<WordSim, Violation> {
        let mut sim = WordSim::new(k);
        for (i, op) in ops.into_iter().enumerate() {
            sim.step(op).map_err(|kind| Violation { position: i + 1, kind })?;
            after(&sim);
        }
        Ok(sim)
    }
}

/// `Ok` if the word is well-formed, otherwise the first violation.
pub fn is_well_formed_kword(tau: &KWord) -> Result<(), Violation> {
    WordSim::run(tau.k, &tau.ops, |_| {}).map(|_| ())
}

/// The colored graph denoted by a well-formed word.
pub fn kword_semantics(signature: &Signature, tau: &KWord) -> Result<ColoredGraph, DecompError> {
    let sim = WordSim::run(tau.k, &tau.ops, |_| {}).map_err(DecompError::IllFormed)?;
    let graph = Graph::build(signature.clone(), sim.labels, &sim.edges)?;
    Ok(ColoredGraph {
        graph,
        chi: sim.chi,
        created: sim.created,
    })
}

/// The colored-vertex sets after each prefix, empty sets dropped.
pub fn path_decomposition_from_kword(tau: &KWord) -> Result<PathDecomposition, DecompError> {
    let mut bags = Vec::new();
    WordSim::run(tau.k, &tau.ops, |sim| {
        let mut bag: Vec<VertexId> = sim.chi.iter().flatten().copied().collect();
        if !bag.is_empty() {
            bag.sort_unstable();
            bags.push(bag);
        }
    })
    .map_err(DecompError::IllFormed)?;
    Ok(PathDecomposition::new(bags))
}

/// Builds the word letter by letter, recording which graph vertex each
/// node letter creates.
struct WordBuilder<'g> {
    g: &'g Graph,
    k: usize,
    ops: Vec<Op>,
    correspondence: Vec<Option<VertexId>>,
    used: Vec<bool>,
    color_of: Vec<Option<Color>>,
}

impl<'g> WordBuilder<'g> {
    fn new(g: &'g Graph, k: usize) -> Self {
        WordBuilder {
            g,
            k,
            ops: Vec::new(),
            correspondence: Vec::new(),
            used: vec![false; k + 1],
            color_of: vec![None; g.num_vertices()],
        }
    }

    fn push(&mut self, op: Op, v: Option<VertexId>) {
        self.ops.push(op);
        self.correspondence.push(v);
    }

    /// Colors `v` with the least free color and adds its edges to every
    /// colored vertex. Returns false if no color is free.
    fn introduce(&mut self, v: VertexId) -> bool {
        let Some(c) = least_free(&self.used) else {
            return false;
        };
        self.used[c] = true;
        self.color_of[v] = Some(c);
        self.push(
            Op::Node {
                color: c,
                label: self.g.label(v),
            },
            Some(v),
        );
        for name in self.g.signature().edge_names() {
            for dir in [Direction::Out, Direction::In] {
                let Some(u) = self.g.neighbor(v, name, dir) else {
                    continue;
                };
                if let Some(cu) = self.color_of[u] {
                    let (src, dst) = if dir == Direction::Out { (c, cu) } else { (cu, c) };
                    self.push(Op::Add { name, src, dst }, None);
                }
            }
        }
        true
    }

    fn forget(&mut self, vs: &mut [VertexId]) {
        vs.sort_unstable_by_key(|&v| self.color_of[v]);
        for &v in vs.iter() {
            let c = self.color_of[v].take().expect("forgotten vertex is colored");
            self.used[c] = false;
            self.push(Op::Forget { color: c }, None);
        }
    }

    fn finish(self) -> Construction<KWord> {
        Construction {
            term: KWord::new(self.k, self.ops),
            correspondence: self.correspondence,
        }
    }
}

/// Word whose semantics is `(G, ∅)`, following the bags left to right.
pub fn kword_from_path_decomposition(g: &Graph, pd: &PathDecomposition) -> Result<Construction<KWord>, DecompError> {
    let k = validate_path_decomposition(g, pd)?;
    let mut b = WordBuilder::new(g, k);
    let mut seen = vec![false; g.num_vertices()];
    let mut in_next = vec![false; g.num_vertices()];
    for (l, bag) in pd.bags.iter().enumerate() {
        for &v in bag {
            if !std::mem::replace(&mut seen[v], true) {
                let ok = b.introduce(v);
                debug_assert!(ok, "bag sizes bound the colors in use");
            }
        }
        if let Some(next) = pd.bags.get(l + 1) {
            for &v in next {
                in_next[v] = true;
            }
        }
        let mut leaving: Vec<_> = bag.iter().copied().filter(|&v| !in_next[v]).collect();
        b.forget(&mut leaving);
        if let Some(next) = pd.bags.get(l + 1) {
            for &v in next {
                in_next[v] = false;
            }
        }
    }
    Ok(b.finish())
}

/// Word for a vertex order using at most `k + 1` colors.
pub fn kword_from_linearization_with(
    g: &Graph,
    order: &[VertexId],
    k: usize,
) -> Result<Construction<KWord>, DecompError> {
    let pos = positions(g, order)?;
    let last = last_neighbor(g, &pos);
    let mut b = WordBuilder::new(g, k);
    let mut colored: Vec<VertexId> = Vec::new();
    for (p, &v) in order.iter().enumerate() {
        if !b.introduce(v) {
            return Err(DecompError::ColorsExhausted { position: p, k });
        }
        colored.push(v);
        let (mut done, rest): (Vec<_>, Vec<_>) = colored.iter().partition(|&&u| last[u] <= p);
        colored = rest;
        b.forget(&mut done);
    }
    Ok(b.finish())
}

/// Word for a vertex order, with `k` the order's pending-vertex bound.
pub fn kword_from_linearization(g: &Graph, order: &[VertexId]) -> Result<Construction<KWord>, DecompError> {
    let k = super::linearization_width(g, order)?;
    kword_from_linearization_with(g, order, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::fixtures::{grid, path, sig};
    use crate::decomp::verify_correspondence;
    use crate::graph::EdgeName;

    fn node(color: Color, label: u16) -> Op {
        Op::Node {
            color,
            label: Label(label),
        }
    }

    fn add(src: Color, dst: Color) -> Op {
        Op::Add {
            name: EdgeName(0),
            src,
            dst,
        }
    }

    fn forget(color: Color) -> Op {
        Op::Forget { color }
    }

    #[test]
    fn empty_word() {
        let cg = kword_semantics(&sig(), &KWord::new(1, vec![])).unwrap();
        assert!(cg.graph.is_empty());
        assert!(!cg.has_active_colors());
    }

    #[test]
    fn two_vertex_word() {
        let w = KWord::new(1, vec![node(0, 0), node(1, 1), add(0, 1), forget(0), forget(1)]);
        let cg = kword_semantics(&sig(), &w).unwrap();
        assert_eq!(cg.graph.num_vertices(), 2);
        assert_eq!(cg.graph.labels(), &[Label(0), Label(1)]);
        assert!(cg.graph.has_edge(Edge {
            name: EdgeName(0),
            src: 0,
            dst: 1
        }));
        assert!(!cg.has_active_colors());
        let pd = path_decomposition_from_kword(&w).unwrap();
        let sizes: Vec<_> = pd.bags.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 1]);
        assert_eq!(validate_path_decomposition(&cg.graph, &pd), Ok(1));
    }

    #[test]
    fn violations() {
        let v = is_well_formed_kword(&KWord::new(1, vec![node(0, 0), node(0, 1)])).unwrap_err();
        assert_eq!(
            v,
            Violation {
                position: 2,
                kind: ViolationKind::ColorActive(0)
            }
        );
        let v = is_well_formed_kword(&KWord::new(1, vec![forget(0)])).unwrap_err();
        assert_eq!(
            v,
            Violation {
                position: 1,
                kind: ViolationKind::ColorInactive(0)
            }
        );
        let v = is_well_formed_kword(&KWord::new(1, vec![node(0, 0), node(1, 1), add(0, 1), add(0, 1)])).unwrap_err();
        assert_eq!(v.position, 4);
        assert!(matches!(v.kind, ViolationKind::DuplicateEdge { .. }));
        let v = is_well_formed_kword(&KWord::new(0, vec![node(1, 0)])).unwrap_err();
        assert!(matches!(v.kind, ViolationKind::ColorOutOfRange { color: 1, k: 0 }));
        let v = is_well_formed_kword(&KWord::new(1, vec![node(0, 0), add(0, 0)])).unwrap_err();
        assert_eq!(v.kind, ViolationKind::SameColor(0));
    }

    #[test]
    fn reused_color_allows_fresh_edge() {
        let w = KWord::new(
            1,
            vec![node(0, 0), node(1, 0), add(0, 1), forget(1), node(1, 0), add(0, 1)],
        );
        assert!(is_well_formed_kword(&w).is_ok());
    }

    #[test]
    fn single_vertex_decomposition() {
        let g = path(1);
        let c = kword_from_path_decomposition(&g, &PathDecomposition::new(vec![vec![0]])).unwrap();
        assert_eq!(c.term.ops, vec![node(0, 0), forget(0)]);
    }

    #[test]
    fn path_round_trip() {
        let g = path(3);
        let c = kword_from_path_decomposition(&g, &PathDecomposition::new(vec![vec![0, 1], vec![1, 2]])).unwrap();
        assert_eq!(c.term.k, 1);
        let cg = kword_semantics(g.signature(), &c.term).unwrap();
        assert!(!cg.has_active_colors());
        assert!(verify_correspondence(&g, &cg, &c.correspondence));
    }

    #[test]
    fn grid_row_sweep_round_trip() {
        let g = grid(3, 3);
        // bag i covers vertices i..=i+3 in row-major order
        let bags: Vec<Vec<_>> = (0..6).map(|i| (i..i + 4).collect()).collect();
        let c = kword_from_path_decomposition(&g, &PathDecomposition::new(bags)).unwrap();
        assert_eq!(c.term.k, 3);
        let cg = kword_semantics(g.signature(), &c.term).unwrap();
        assert!(verify_correspondence(&g, &cg, &c.correspondence));
    }

    #[test]
    fn linearization_round_trips() {
        let word = path(4);
        let c = kword_from_linearization(&word, &[0, 1, 2, 3]).unwrap();
        assert_eq!(c.term.k, 1);
        for (m, n) in [(2, 3), (2, 4)] {
            let g = grid(m, n);
            let order: Vec<_> = (0..m * n).collect();
            let c = kword_from_linearization(&g, &order).unwrap();
            assert_eq!(c.term.k, n);
            let cg = kword_semantics(g.signature(), &c.term).unwrap();
            assert!(verify_correspondence(&g, &cg, &c.correspondence));
            assert_eq!(cg.graph, g);
            let by_column: Vec<_> = (0..n).flat_map(|j| (0..m).map(move |i| i * n + j)).collect();
            let c = kword_from_linearization(&g, &by_column).unwrap();
            assert_eq!(c.term.k, m);
            let cg = kword_semantics(g.signature(), &c.term).unwrap();
            assert!(verify_correspondence(&g, &cg, &c.correspondence));
        }
    }

    #[test]
    fn linearization_runs_out_of_colors() {
        let g = grid(3, 3);
        let order: Vec<_> = (0..9).collect();
        assert!(matches!(
            kword_from_linearization_with(&g, &order, 2),
            Err(DecompError::ColorsExhausted { .. })
        ));
    }
}
