//! Vertex-order heuristics for path and tree decompositions.

use std::collections::{BTreeSet, VecDeque};

use super::path::linearization_width;
use crate::graph::{Graph, VertexId};

fn fill_in(adj: &[BTreeSet<VertexId>], v: VertexId) -> usize {
    let nbrs: Vec<_> = adj[v].iter().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        missing += nbrs[i + 1..].iter().filter(|&&b| !adj[*a].contains(b)).count();
    }
    missing
}

/// Elimination order that repeatedly removes a vertex adding the fewest fill
/// edges (ties by degree, then id).
pub fn min_fill_order(g: &Graph) -> Vec<VertexId> {
    let n = g.num_vertices();
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n)
        .map(|v| g.undirected_neighbors(v).into_iter().collect())
        .collect();
    let mut key: Vec<(usize, usize)> = (0..n).map(|v| (fill_in(&adj, v), adj[v].len())).collect();
    let mut queue: BTreeSet<(usize, usize, VertexId)> = (0..n).map(|v| (key[v].0, key[v].1, v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, _, v)) = queue.pop_first() {
        order.push(v);
        let nbrs: Vec<VertexId> = std::mem::take(&mut adj[v]).into_iter().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut touched: BTreeSet<VertexId> = nbrs.iter().copied().collect();
        for &a in &nbrs {
            touched.extend(adj[a].iter().copied());
        }
        for u in touched {
            if queue.remove(&(key[u].0, key[u].1, u)) {
                key[u] = (fill_in(&adj, u), adj[u].len());
                queue.insert((key[u].0, key[u].1, u));
            }
        }
    }
    order
}

fn sorted_neighbors(g: &Graph, v: VertexId) -> Vec<VertexId> {
    let mut n = g.undirected_neighbors(v);
    n.sort_unstable();
    n.dedup();
    n
}

fn bfs(g: &Graph, start: VertexId, seen: &mut [bool]) -> Vec<VertexId> {
    let mut out = vec![start];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for u in sorted_neighbors(g, v) {
            if !seen[u] {
                seen[u] = true;
                out.push(u);
                queue.push_back(u);
            }
        }
    }
    out
}

/// Breadth-first order, each component started from a pseudo-peripheral vertex.
fn bfs_order(g: &Graph) -> Vec<VertexId> {
    let n = g.num_vertices();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if done[s] {
            continue;
        }
        let mut start = s;
        let mut component = bfs(g, start, &mut vec![false; n]);
        for _ in 0..4 {
            let far = *component.last().expect("component contains its start");
            if far == start {
                break;
            }
            let next = bfs(g, far, &mut vec![false; n]);
            start = far;
            component = next;
        }
        order.extend(bfs(g, start, &mut done));
    }
    order
}

/// Grows the order one vertex at a time, always placing the frontier vertex
/// that leaves the fewest placed vertices with unplaced neighbours.
fn greedy_order(g: &Graph) -> Vec<VertexId> {
    let n = g.num_vertices();
    let nbrs: Vec<Vec<VertexId>> = (0..n).map(|v| sorted_neighbors(g, v)).collect();
    let mut remaining: Vec<usize> = nbrs.iter().map(Vec::len).collect();
    let mut placed = vec![false; n];
    let mut frontier: BTreeSet<VertexId> = BTreeSet::new();
    let mut fresh: BTreeSet<(usize, VertexId)> = (0..n).map(|v| (nbrs[v].len(), v)).collect();
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let v = if frontier.is_empty() {
            fresh.pop_first().expect("unplaced vertex remains").1
        } else {
            let score = |v: VertexId| {
                let closed = nbrs[v].iter().filter(|&&u| placed[u] && remaining[u] == 1).count();
                let opens = usize::from(nbrs[v].iter().any(|&u| !placed[u]));
                (opens as isize - closed as isize, v)
            };
            let v = frontier
                .iter()
                .copied()
                .min_by_key(|&v| score(v))
                .expect("frontier is nonempty");
            frontier.remove(&v);
            fresh.remove(&(nbrs[v].len(), v));
            v
        };
        placed[v] = true;
        order.push(v);
        for &u in &nbrs[v] {
            remaining[u] -= 1;
            if !placed[u] && frontier.insert(u) {
                fresh.remove(&(nbrs[u].len(), u));
            }
        }
    }
    order
}

/// Identity, breadth-first and greedy orders.
pub fn linear_order_candidates(g: &Graph) -> Vec<Vec<VertexId>> {
    vec![g.vertices().collect(), bfs_order(g), greedy_order(g)]
}

/// The candidate order with the smallest pending-vertex bound, with that bound.
pub fn heuristic_linear_order(g: &Graph) -> (Vec<VertexId>, usize) {
    linear_order_candidates(g)
        .into_iter()
        .map(|o| {
            let w = linearization_width(g, &o).expect("candidates are permutations");
            (o, w)
        })
        .min_by_key(|(_, w)| *w)
        .expect("at least one candidate")
}
