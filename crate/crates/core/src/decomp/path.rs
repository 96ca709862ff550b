use super::DecompError;
use crate::graph::{Graph, VertexId};

/// A sequence of bags `V_1..V_n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<VertexId>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>) -> Self {
        PathDecomposition { bags }
    }

    /// Largest bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }
}

/// Per-vertex membership check shared by both decomposition validators.
pub(super) fn check_bags<'a>(
    g: &Graph,
    bags: impl Iterator<Item = &'a [VertexId]>,
) -> Result<Vec<Vec<usize>>, DecompError> {
    let n = g.num_vertices();
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in bags.enumerate() {
        if bag.is_empty() {
            return Err(DecompError::EmptyBag(i));
        }
        for &v in bag {
            if v >= n {
                return Err(DecompError::UnknownVertex { bag: i, vertex: v });
            }
            if occurs[v].last() == Some(&i) {
                return Err(DecompError::DuplicateInBag { bag: i, vertex: v });
            }
            occurs[v].push(i);
        }
    }
    if let Some(v) = occurs.iter().position(Vec::is_empty) {
        return Err(DecompError::MissingVertex(v));
    }
    Ok(occurs)
}

/// Edge coverage given sorted per-vertex bag lists.
pub(super) fn check_edges(g: &Graph, occurs: &[Vec<usize>]) -> Result<(), DecompError> {
    for e in g.edges() {
        let (a, b) = (&occurs[e.src], &occurs[e.dst]);
        let (mut i, mut j) = (0, 0);
        let mut covered = false;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    covered = true;
                    break;
                }
            }
        }
        if !covered {
            return Err(DecompError::UncoveredEdge { src: e.src, dst: e.dst });
        }
    }
    Ok(())
}

/// Returns the width, or the first violated condition.
pub fn validate_path_decomposition(g: &Graph, pd: &PathDecomposition) -> Result<usize, DecompError> {
    if pd.bags.is_empty() {
        return if g.is_empty() { Ok(0) } else { Err(DecompError::NoBags) };
    }
    let occurs = check_bags(g, pd.bags.iter().map(Vec::as_slice))?;
    check_edges(g, &occurs)?;
    for (v, bags) in occurs.iter().enumerate() {
        if let Some(w) = bags.windows(2).find(|w| w[1] != w[0] + 1) {
            return Err(DecompError::PathGap {
                vertex: v,
                before: w[0],
                gap: w[0] + 1,
                after: w[1],
            });
        }
    }
    Ok(pd.width())
}

/// Position of every vertex in `order`, or an error if it is not a permutation.
pub(super) fn positions(g: &Graph, order: &[VertexId]) -> Result<Vec<usize>, DecompError> {
    let n = g.num_vertices();
    if order.len() != n {
        return Err(DecompError::NotPermutation);
    }
    let mut pos = vec![usize::MAX; n];
    for (p, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(DecompError::NotPermutation);
        }
        pos[v] = p;
    }
    Ok(pos)
}

/// Position of each vertex's last neighbour in the order (its own position if
/// it has no later neighbour).
pub(super) fn last_neighbor(g: &Graph, pos: &[usize]) -> Vec<usize> {
    let mut last: Vec<usize> = pos.to_vec();
    for e in g.edges() {
        let p = pos[e.src].max(pos[e.dst]);
        last[e.src] = last[e.src].max(p);
        last[e.dst] = last[e.dst].max(p);
    }
    last
}

/// Number of vertices `u ≤ v` with a neighbour `w > v`, for every prefix end `v`.
fn pending_counts(g: &Graph, order: &[VertexId]) -> Result<Vec<usize>, DecompError> {
    let pos = positions(g, order)?;
    let last = last_neighbor(g, &pos);
    let n = order.len();
    // u is pending at positions pos[u]..last[u]-1
    let mut delta = vec![0isize; n + 1];
    for u in 0..n {
        if last[u] > pos[u] {
            delta[pos[u]] += 1;
            delta[last[u]] -= 1;
        }
    }
    let mut acc = 0isize;
    Ok(delta[..n]
        .iter()
        .map(|d| {
            acc += d;
            acc as usize
        })
        .collect())
}

/// Largest pending-vertex count over all prefixes of `order`.
pub fn linearization_width(g: &Graph, order: &[VertexId]) -> Result<usize, DecompError> {
    Ok(pending_counts(g, order)?.into_iter().max().unwrap_or(0))
}

/// True if at every vertex at most `k` earlier-or-equal vertices still have a
/// later neighbour.
pub fn check_k_bounded(g: &Graph, order: &[VertexId], k: usize) -> Result<bool, DecompError> {
    Ok(pending_counts(g, order)?.into_iter().all(|c| c <= k))
}

/// Bag `p` holds `order[p]` and every earlier vertex with a neighbour at or
/// after position `p`. Width is at most the linearization width.
pub fn path_decomposition_from_order(g: &Graph, order: &[VertexId]) -> Result<PathDecomposition, DecompError> {
    let pos = positions(g, order)?;
    let last = last_neighbor(g, &pos);
    let mut live: std::collections::BTreeSet<VertexId> = Default::default();
    let mut bags = Vec::with_capacity(order.len());
    for (p, &v) in order.iter().enumerate() {
        live.retain(|&u| last[u] >= p);
        live.insert(v);
        bags.push(live.iter().copied().collect());
    }
    Ok(PathDecomposition::new(bags))
}
