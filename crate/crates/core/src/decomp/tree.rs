use super::heuristic::min_fill_order;
use super::path::{check_bags, check_edges};
use super::{DecompError, PathDecomposition};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TdNode {
    pub bag: Vec<VertexId>,
    pub children: Vec<usize>,
}

/// A rooted tree of bags.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    pub nodes: Vec<TdNode>,
    pub root: usize,
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 when there are no nodes).
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    /// The path as a degenerate tree rooted at the first bag.
    pub fn from_path(pd: &PathDecomposition) -> Self {
        let n = pd.bags.len();
        let nodes = pd
            .bags
            .iter()
            .enumerate()
            .map(|(i, bag)| TdNode {
                bag: bag.clone(),
                children: if i + 1 < n { vec![i + 1] } else { vec![] },
            })
            .collect();
        TreeDecomposition { nodes, root: 0 }
    }

    pub fn is_binary(&self) -> bool {
        self.nodes.iter().all(|n| n.children.len() <= 2)
    }

    /// Parent of each node, after checking that the nodes form a tree.
    pub fn parents(&self) -> Result<Vec<Option<usize>>, DecompError> {
        let n = self.nodes.len();
        if self.root >= n {
            return Err(DecompError::BadRoot(self.root));
        }
        let mut parent = vec![None; n];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= n {
                    return Err(DecompError::UnknownChild { node: i, child: c });
                }
                if c == self.root || parent[c].is_some() {
                    return Err(DecompError::MultipleParents(c));
                }
                parent[c] = Some(i);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            seen[t] = true;
            stack.extend(&self.nodes[t].children);
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return Err(DecompError::Unreachable(t));
        }
        Ok(parent)
    }

    /// Nodes in an order where every child precedes its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.nodes[t].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }
}

/// Returns the width, or the first violated condition.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<usize, DecompError> {
    if td.nodes.is_empty() {
        return if g.is_empty() { Ok(0) } else { Err(DecompError::NoBags) };
    }
    let parent = td.parents()?;
    let occurs = check_bags(g, td.nodes.iter().map(|n| n.bag.as_slice()))?;
    check_edges(g, &occurs)?;
    for (v, nodes) in occurs.iter().enumerate() {
        // the bags holding v are connected iff exactly one of them has a
        // parent outside the set
        let mut tops = nodes
            .iter()
            .copied()
            .filter(|&t| parent[t].is_none_or(|p| nodes.binary_search(&p).is_err()));
        let first = tops.next().expect("nonempty set has a top");
        if let Some(second) = tops.next() {
            return Err(DecompError::TreeGap {
                vertex: v,
                first,
                second,
            });
        }
    }
    Ok(td.width())
}

/// Splits nodes with more than two children into chains of copies of the
/// same bag.
pub fn binarize(td: &TreeDecomposition) -> TreeDecomposition {
    let mut nodes = td.nodes.clone();
    for t in 0..td.nodes.len() {
        if nodes[t].children.len() <= 2 {
            continue;
        }
        let children = std::mem::take(&mut nodes[t].children);
        let bag = nodes[t].bag.clone();
        let mut current = t;
        let last = children.len() - 2;
        for (i, &c) in children.iter().enumerate().take(last + 1) {
            if i == last {
                nodes[current].children = vec![c, children[i + 1]];
            } else {
                let copy = nodes.len();
                nodes.push(TdNode {
                    bag: bag.clone(),
                    children: Vec::new(),
                });
                nodes[current].children = vec![c, copy];
                current = copy;
            }
        }
    }
    TreeDecomposition { nodes, root: td.root }
}

/// Decomposition induced by eliminating vertices in `order`: node `i` holds
/// `order[i]` and its neighbours at elimination time.
pub fn decomposition_from_elimination(g: &Graph, order: &[VertexId]) -> TreeDecomposition {
    use std::collections::BTreeSet;
    let n = g.num_vertices();
    if n == 0 {
        return TreeDecomposition::default();
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n)
        .map(|v| g.undirected_neighbors(v).into_iter().collect())
        .collect();
    let mut nodes = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let nbrs: Vec<VertexId> = adj[v].iter().copied().collect();
        for (x, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[x + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[i] = nbrs.iter().map(|&u| pos[u]).min();
        let mut bag = nbrs;
        bag.push(v);
        bag.sort_unstable();
        nodes.push(TdNode {
            bag,
            children: Vec::new(),
        });
    }
    let root = n - 1;
    for i in 0..root {
        let p = parent[i].unwrap_or(root);
        nodes[p].children.push(i);
    }
    TreeDecomposition { nodes, root }
}

/// Min-fill elimination heuristic; fails if the result is wider than `target`.
pub fn heuristic_tree_decomposition(g: &Graph, target: Option<usize>) -> Result<TreeDecomposition, DecompError> {
    let td = decomposition_from_elimination(g, &min_fill_order(g));
    let width = td.width();
    debug_assert_eq!(validate_tree_decomposition(g, &td), Ok(width));
    match target {
        Some(limit) if width > limit => Err(DecompError::WidthExceeded { width, limit }),
        _ => Ok(td),
    }
}
