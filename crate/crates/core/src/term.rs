//! Arena-backed ranked trees (leaf / unary / binary nodes).
//!
//! Children always precede their parent in the arena, so a single forward pass
//! is a bottom-up traversal and no recursion is needed on deep terms.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("term has no nodes")]
    Empty,
    #[error("node {node} refers to child {child}, which does not precede it")]
    ChildOrder { node: usize, child: usize },
    #[error("node {0} is used as a child more than once")]
    Shared(usize),
    #[error("node {0} is not reachable from the root")]
    Unreachable(usize),
    #[error("root {0} is out of range")]
    BadRoot(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermNode<S> {
    Leaf(S),
    Unary(S, usize),
    Binary(S, usize, usize),
}

impl<S> TermNode<S> {
    pub fn symbol(&self) -> &S {
        match self {
            TermNode::Leaf(s) | TermNode::Unary(s, _) | TermNode::Binary(s, _, _) => s,
        }
    }

    pub fn children(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            TermNode::Leaf(_) => (None, None),
            TermNode::Unary(_, c) => (Some(c), None),
            TermNode::Binary(_, l, r) => (Some(l), Some(r)),
        };
        a.into_iter().chain(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedTerm<S> {
    nodes: Vec<TermNode<S>>,
    root: usize,
}

impl<S> RankedTerm<S> {
    /// Validates that the nodes form a single tree rooted at `root`.
    pub fn new(nodes: Vec<TermNode<S>>, root: usize) -> Result<Self, TermError> {
        if nodes.is_empty() {
            return Err(TermError::Empty);
        }
        if root >= nodes.len() {
            return Err(TermError::BadRoot(root));
        }
        let mut used = vec![false; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            for c in node.children() {
                if c >= i {
                    return Err(TermError::ChildOrder { node: i, child: c });
                }
                if std::mem::replace(&mut used[c], true) {
                    return Err(TermError::Shared(c));
                }
            }
        }
        // every node except the root has exactly one parent; a node without
        // a parent other than the root is disconnected
        if let Some(i) = (0..nodes.len()).find(|&i| i != root && !used[i]) {
            return Err(TermError::Unreachable(i));
        }
        if used[root] {
            return Err(TermError::Shared(root));
        }
        Ok(RankedTerm { nodes, root })
    }

    pub fn nodes(&self) -> &[TermNode<S>] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Parent index of every node (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                parents[c] = Some(i);
            }
        }
        parents
    }
}

/// Incremental construction of a [`RankedTerm`].
#[derive(Clone, Debug)]
pub struct TermBuilder<S> {
    nodes: Vec<TermNode<S>>,
}

impl<S> Default for TermBuilder<S> {
    fn default() -> Self {
        TermBuilder { nodes: Vec::new() }
    }
}

impl<S> TermBuilder<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, s: S) -> usize {
        self.nodes.push(TermNode::Leaf(s));
        self.nodes.len() - 1
    }

    pub fn unary(&mut self, s: S, child: usize) -> usize {
        self.nodes.push(TermNode::Unary(s, child));
        self.nodes.len() - 1
    }

    pub fn binary(&mut self, s: S, left: usize, right: usize) -> usize {
        self.nodes.push(TermNode::Binary(s, left, right));
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn finish(self, root: usize) -> Result<RankedTerm<S>, TermError> {
        RankedTerm::new(self.nodes, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_validates() {
        let mut b = TermBuilder::new();
        let l = b.leaf('a');
        let r = b.leaf('b');
        let u = b.unary('f', r);
        let root = b.binary('g', l, u);
        let t = b.finish(root).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.parents(), vec![Some(3), Some(2), Some(3), None]);
    }

    #[test]
    fn rejects_malformed_arenas() {
        let shared = vec![TermNode::Leaf('a'), TermNode::Binary('g', 0, 0)];
        assert_eq!(RankedTerm::new(shared, 1), Err(TermError::Shared(0)));
        let forward = vec![TermNode::Unary('f', 1), TermNode::Leaf('a')];
        assert!(matches!(RankedTerm::new(forward, 0), Err(TermError::ChildOrder { .. })));
        let stray = vec![TermNode::Leaf('a'), TermNode::Leaf('b')];
        assert_eq!(RankedTerm::new(stray, 1), Err(TermError::Unreachable(0)));
        assert_eq!(RankedTerm::<char>::new(vec![], 0), Err(TermError::Empty));
    }
}
