//! Closed subsets of ℕ^ℕ as finite trees: a prefix-closed node set truncated
//! at depth D, every depth-D node regarded as extendable, so no branch dies
//! early. Lexicographic least-branch selection and the retraction that fixes
//! branch prefixes and sends everything else to a canonical nearby branch.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::CoreError;

/// Prefix-closed ℕ-word tree with uniform leaf depth and optional per-level
/// label bounds (a compactness witness; not part of the node data).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedTree {
    depth: u8,
    nodes: BTreeSet<Vec<u32>>,
    bounds: Option<Vec<u32>>,
}

impl ClosedTree {
    /// Validates prefix closure, uniform leaf depth, and the label bounds.
    /// The root is always included.
    pub fn new(node_list: Vec<Vec<u32>>, bounds: Option<Vec<u32>>) -> Result<ClosedTree, CoreError> {
        let mut nodes: BTreeSet<Vec<u32>> = node_list.into_iter().collect();
        if nodes.is_empty() {
            return Err(CoreError::EmptyTree);
        }
        nodes.insert(Vec::new());
        let depth = nodes.iter().map(Vec::len).max().unwrap();
        if depth > 255 {
            return Err(CoreError::DimensionMismatch("tree deeper than the supported bound"));
        }
        let depth = depth as u8;
        let mut has_child: BTreeSet<&[u32]> = BTreeSet::new();
        for node in &nodes {
            if !node.is_empty() {
                let parent = &node[..node.len() - 1];
                if !nodes.contains(parent) {
                    return Err(CoreError::DimensionMismatch("tree nodes are not prefix-closed"));
                }
                has_child.insert(parent);
            }
        }
        for node in &nodes {
            if node.len() < depth as usize && !has_child.contains(node.as_slice()) {
                return Err(CoreError::DimensionMismatch("tree has a dead end above the leaf depth"));
            }
        }
        if let Some(m) = &bounds {
            if m.len() != depth as usize {
                return Err(CoreError::DimensionMismatch("bounds length does not match the tree depth"));
            }
            for node in &nodes {
                if node.iter().zip(m).any(|(label, bound)| label > bound) {
                    return Err(CoreError::DimensionMismatch("node label exceeds the level bound"));
                }
            }
        }
        Ok(ClosedTree { depth, nodes, bounds })
    }

    /// Builds the tree whose branches are exactly the given leaves.
    pub fn from_leaves(leaves: Vec<Vec<u32>>, bounds: Option<Vec<u32>>) -> Result<ClosedTree, CoreError> {
        if leaves.is_empty() {
            return Err(CoreError::EmptyTree);
        }
        let depth = leaves[0].len();
        if leaves.iter().any(|l| l.len() != depth) {
            return Err(CoreError::DimensionMismatch("leaves have unequal lengths"));
        }
        let mut nodes = Vec::new();
        for leaf in leaves {
            for len in 1..=leaf.len() {
                nodes.push(leaf[..len].to_vec());
            }
            nodes.push(leaf);
        }
        ClosedTree::new(nodes, bounds)
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn bounds(&self) -> Option<&[u32]> {
        self.bounds.as_deref()
    }

    pub fn is_node(&self, w: &[u32]) -> bool {
        self.nodes.contains(w)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[u32]> {
        self.nodes.iter().map(Vec::as_slice)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &[u32]> {
        self.nodes
            .iter()
            .filter(|n| n.len() == self.depth as usize)
            .map(Vec::as_slice)
    }

    pub fn branch_count(&self) -> usize {
        self.leaves().count()
    }

    /// Smallest label k with prefix·k a node. The set is ordered with a word
    /// before all its extensions, so the first entry at or after prefix·0
    /// that still extends the prefix starts with the least child.
    fn min_child(&self, prefix: &[u32]) -> Option<u32> {
        let mut lower = prefix.to_vec();
        lower.push(0);
        let next = self.nodes.range(lower..).next()?;
        (next.len() > prefix.len() && next[..prefix.len()] == *prefix)
            .then(|| next[prefix.len()])
    }

    /// Length-`length` prefix of the lexicographically least branch, by the
    /// greedy rule: always descend through the smallest child label.
    pub fn least_branch(&self, length: u8) -> Result<Vec<u32>, CoreError> {
        if length > self.depth {
            return Err(CoreError::DepthExceeded { depth: length, max: self.depth });
        }
        let mut branch = Vec::with_capacity(length as usize);
        for _ in 0..length {
            branch.push(self.min_child(&branch).unwrap());
        }
        Ok(branch)
    }

    /// Identity on branch prefixes; otherwise the least-branch continuation
    /// of the longest prefix of `w` that is a node. Idempotent, and the
    /// output is always a branch prefix of the same length as `w`.
    pub fn retract(&self, w: &[u32]) -> Result<Vec<u32>, CoreError> {
        if w.len() > self.depth as usize {
            return Err(CoreError::DepthExceeded {
                depth: w.len().min(255) as u8,
                max: self.depth,
            });
        }
        let mut keep = 0;
        while keep < w.len() && self.is_node(&w[..keep + 1]) {
            keep += 1;
        }
        let mut out = w[..keep].to_vec();
        while out.len() < w.len() {
            out.push(self.min_child(&out).unwrap());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// root children {2,5}; (2) children {1,3}; (5) child {0}.
    fn example_tree() -> ClosedTree {
        ClosedTree::from_leaves(
            vec![vec![2, 1], vec![2, 3], vec![5, 0]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn construction_checks() {
        assert_eq!(ClosedTree::new(vec![], None), Err(CoreError::EmptyTree));
        assert_eq!(
            ClosedTree::new(vec![vec![0, 0]], None),
            Err(CoreError::DimensionMismatch("tree nodes are not prefix-closed"))
        );
        assert_eq!(
            ClosedTree::new(vec![vec![0], vec![0, 0], vec![1]], None),
            Err(CoreError::DimensionMismatch("tree has a dead end above the leaf depth"))
        );
        assert_eq!(
            ClosedTree::from_leaves(vec![vec![1], vec![1, 0]], None),
            Err(CoreError::DimensionMismatch("leaves have unequal lengths"))
        );
        let t = example_tree();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.branch_count(), 3);
        assert!(t.is_node(&[]));
        assert!(t.is_node(&[2, 3]));
        assert!(!t.is_node(&[3]));
    }

    #[test]
    fn bounds_checks() {
        assert!(ClosedTree::from_leaves(vec![vec![2, 1]], Some(vec![2, 3])).is_ok());
        assert_eq!(
            ClosedTree::from_leaves(vec![vec![2, 1]], Some(vec![1, 3])),
            Err(CoreError::DimensionMismatch("node label exceeds the level bound"))
        );
        assert_eq!(
            ClosedTree::from_leaves(vec![vec![2, 1]], Some(vec![2])),
            Err(CoreError::DimensionMismatch("bounds length does not match the tree depth"))
        );
    }

    #[test]
    fn least_branch_examples() {
        let t = example_tree();
        assert_eq!(t.least_branch(2).unwrap(), [2, 1]);
        assert_eq!(t.least_branch(1).unwrap(), [2]);
        assert_eq!(t.least_branch(0).unwrap(), Vec::<u32>::new());

        let path = ClosedTree::from_leaves(vec![vec![4, 0, 7]], None).unwrap();
        assert_eq!(path.least_branch(3).unwrap(), [4, 0, 7]);

        let zeros = ClosedTree::from_leaves(vec![vec![0, 0]], None).unwrap();
        assert_eq!(zeros.least_branch(2).unwrap(), [0, 0]);

        assert_eq!(
            t.least_branch(3),
            Err(CoreError::DepthExceeded { depth: 3, max: 2 })
        );
    }

    #[test]
    fn least_branch_is_a_minimum() {
        let t = example_tree();
        let least = t.least_branch(2).unwrap();
        for leaf in t.leaves() {
            assert!(least.as_slice() <= leaf);
        }
    }

    #[test]
    fn retract_examples() {
        let t = example_tree();
        assert_eq!(t.retract(&[2, 3]).unwrap(), [2, 3]);
        assert_eq!(t.retract(&[2, 9]).unwrap(), [2, 1]);
        assert_eq!(t.retract(&[7, 0]).unwrap(), [2, 1]);
        assert_eq!(t.retract(&[5]).unwrap(), [5]);
        assert_eq!(t.retract(&[]).unwrap(), Vec::<u32>::new());
        assert_eq!(
            t.retract(&[0, 0, 0]),
            Err(CoreError::DepthExceeded { depth: 3, max: 2 })
        );
    }

    #[test]
    fn retract_fixes_exactly_branch_prefixes_and_is_idempotent() {
        let t = example_tree();
        for a in 0..8u32 {
            for b in 0..8u32 {
                let w = vec![a, b];
                let out = t.retract(&w).unwrap();
                assert!(t.is_node(&out));
                assert_eq!(out.len(), w.len());
                assert_eq!(t.retract(&out).unwrap(), out);
                assert_eq!(out == w, t.is_node(&w));
            }
        }
    }

    #[test]
    fn retract_agrees_on_shared_valid_prefixes() {
        // inputs agreeing on a node prefix keep agreeing there after retract
        let t = example_tree();
        let a = t.retract(&[2, 7]).unwrap();
        let b = t.retract(&[2, 8]).unwrap();
        assert_eq!(a[..1], b[..1]);
    }
}
