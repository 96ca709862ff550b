use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decomp::{
    heuristic_linear_order, path_decomposition_from_order, PathDecomposition, TdNode, TreeDecomposition,
};
use crate::graph::{Edge, EdgeName, Graph, Label, Signature, VertexId};
use crate::semiring::Semiring;
use crate::wts::{tile_of, StateId, Wts};

use super::Cnf;

pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, len: usize) -> String {
    (0..len.max(1)).map(|_| if rng.gen() { '1' } else { '0' }).collect()
}

/// An `n x n` 0/1 matrix with each entry set with probability `density`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Vec<Vec<bool>> {
    (0..n)
        .map(|_| (0..n).map(|_| rng.gen_bool(density)).collect())
        .collect()
}

/// Symmetric adjacency matrix of a G(n, p) graph without loops.
pub fn random_adjacency<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let e = rng.gen_bool(p);
            adj[i][j] = e;
            adj[j][i] = e;
        }
    }
    adj
}

/// `m` clauses over `n` variables, each of 1 to `max_len` distinct
/// variables with random signs.
pub fn random_cnf<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, max_len: usize) -> Cnf {
    let vars: Vec<i32> = (1..=n as i32).collect();
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.clamp(1, n.max(1)));
            vars.choose_multiple(rng, len)
                .map(|&v| if rng.gen() { v } else { -v })
                .collect()
        })
        .collect();
    Cnf { num_vars: n, clauses }
}

/// A random tiling system guaranteed to admit some runs on `g`: the tiles
/// of a few random labelings plus some stray tiles, with random weights.
pub fn random_wts_for_graph<R: Rng + ?Sized>(rng: &mut R, g: &Graph, semiring: Semiring, num_states: usize) -> Wts {
    let num_states = num_states.max(1);
    let n = g.num_vertices();
    let mut tiles = BTreeMap::new();
    let random_labeling =
        |rng: &mut R| -> Vec<StateId> { (0..n).map(|_| StateId(rng.gen_range(0..num_states) as u16)).collect() };
    for _ in 0..rng.gen_range(1..=3) {
        let rho = random_labeling(rng);
        for v in g.vertices() {
            let tile = tile_of(g, &rho, v).expect("labeling covers the graph");
            let w = semiring.random_weight(rng);
            tiles.entry(tile).or_insert(w);
        }
    }
    for _ in 0..rng.gen_range(0..=n) {
        let rho = random_labeling(rng);
        let v = rng.gen_range(0..n.max(1));
        if v < n {
            let tile = tile_of(g, &rho, v).expect("labeling covers the graph");
            let w = semiring.random_weight(rng);
            tiles.entry(tile).or_insert(w);
        }
    }
    let states = (0..num_states).map(|i| format!("s{i}")).collect();
    Wts::new(g.signature().clone(), semiring, states, tiles.into_iter().collect()).expect("tiles match the graph")
}

/// A random graph with matching decompositions of bounded width and a
/// tiling system that admits runs on it.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub wts: Wts,
    pub graph: Graph,
    pub path: PathDecomposition,
    pub tree: TreeDecomposition,
}

fn random_signature() -> Signature {
    Signature::new(["a", "b"], ["x", "y"]).expect("valid signature")
}

/// A partial k-tree: each new vertex joins up to `width` vertices of an
/// existing bag, so the bags form a tree decomposition of width at most
/// `width`.
fn random_partial_ktree<R: Rng + ?Sized>(rng: &mut R, n: usize, width: usize) -> (Graph, TreeDecomposition) {
    let sig = random_signature();
    let names: Vec<EdgeName> = sig.edge_names().collect();
    let mut used: HashSet<(EdgeName, VertexId, bool)> = HashSet::new();
    let mut edges = Vec::new();
    let mut try_edge = |rng: &mut R, a: VertexId, b: VertexId| {
        let name = *names.choose(rng).expect("names");
        let (src, dst) = if rng.gen() { (a, b) } else { (b, a) };
        if !used.contains(&(name, src, true)) && !used.contains(&(name, dst, false)) {
            used.insert((name, src, true));
            used.insert((name, dst, false));
            edges.push(Edge { name, src, dst });
        }
    };
    let mut nodes = vec![TdNode {
        bag: vec![0],
        children: vec![],
    }];
    for v in 1..n {
        let b = rng.gen_range(0..nodes.len());
        let parent_bag = nodes[b].bag.clone();
        let keep = rng.gen_range(0..=width.min(parent_bag.len()));
        let mut bag: Vec<VertexId> = parent_bag.choose_multiple(rng, keep).copied().collect();
        for &u in &bag {
            if rng.gen_bool(0.7) {
                try_edge(rng, u, v);
            }
        }
        if bag.len() >= 2 && rng.gen_bool(0.3) {
            try_edge(rng, bag[0], bag[1]);
        }
        bag.push(v);
        bag.sort_unstable();
        nodes.push(TdNode { bag, children: vec![] });
        let child = nodes.len() - 1;
        nodes[b].children.push(child);
    }
    let labels = (0..n).map(|_| Label(rng.gen_range(0..2))).collect();
    let graph = Graph::build(sig, labels, &edges).expect("degree constraints respected");
    (graph, TreeDecomposition { nodes, root: 0 })
}

/// A random instance with `1..=max_vertices` vertices, `1..=max_states`
/// states, and path and tree decompositions of width at most `width`.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    semiring: Semiring,
    max_vertices: usize,
    max_states: usize,
    width: usize,
) -> RandomInstance {
    loop {
        let n = rng.gen_range(1..=max_vertices.max(1));
        let (graph, tree) = random_partial_ktree(rng, n, width);
        let (order, _) = heuristic_linear_order(&graph);
        let path = path_decomposition_from_order(&graph, &order).expect("order is a permutation");
        if path.width() > width {
            continue;
        }
        let states = rng.gen_range(1..=max_states.max(1));
        let wts = random_wts_for_graph(rng, &graph, semiring, states);
        return RandomInstance { wts, graph, path, tree };
    }
}
