//! Perfect leveled subtrees: embedded binary trees whose nodes at equal depth
//! sit on a common level of the host tree.

use rand::Rng;

use crate::error::{Error, Result};
use crate::tree::{PrefixTree, MAX_TREE_DEPTH};

/// Default depth bound for [`leveled_subtree_depth`].
pub const DEFAULT_LEVELED_BOUND: usize = 16;

/// Ancestors at level `to` of the sorted positions at level `from > to`.
fn ancestors(nodes: &[u64], from: usize, to: usize) -> Vec<u64> {
    let shift = from - to;
    let mut out: Vec<u64> = nodes.iter().map(|&p| p >> shift).collect();
    out.dedup();
    out
}

/// Nodes at `level` whose two child subtrees both reach a marked node, where
/// `marked` lists positions at `level + 1`.
fn feasible(tree: &PrefixTree, level: usize, marked: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < marked.len() {
        let (a, b) = (marked[i], marked[i + 1]);
        if a & 1 == 0 && b == a + 1 {
            let parent = a >> 1;
            debug_assert!(tree.contains(level, parent));
            out.push(parent);
            i += 2;
        } else {
            i += 1;
        }
    }
    out
}

struct Search<'a> {
    tree: &'a PrefixTree,
    /// Levels holding at least one node with two children, ascending.
    branching: Vec<usize>,
    best: usize,
}

impl Search<'_> {
    /// `nodes` are the feasible roots for `k` embedded levels at branching
    /// level index `bi`; try to extend upward.
    fn descend(&mut self, bi: usize, nodes: &[u64], k: usize) {
        self.best = self.best.max(k);
        let level = self.branching[bi];
        for bj in (0..bi).rev() {
            // At most `bj + 1` more branching levels remain above.
            if k + bj < self.best {
                return;
            }
            let up = self.branching[bj];
            let marked = ancestors(nodes, level, up + 1);
            let next = feasible(self.tree, up, &marked);
            if !next.is_empty() {
                self.descend(bj, &next, k + 1);
            }
        }
    }
}

/// Largest `d` such that a perfect leveled binary subtree of depth `d` embeds
/// in `tree`, refusing trees deeper than `bound`.
///
/// Internal embedded nodes must sit on levels where the host branches, and
/// the embedded leaves can always be taken one level below the deepest
/// internal level (those nodes cover every deeper candidate). Level sequences
/// are explored bottom-up with a bound on the levels still available.
pub fn leveled_subtree_depth_bounded(tree: &PrefixTree, bound: usize) -> Result<usize> {
    if tree.depth() > bound.min(MAX_TREE_DEPTH) {
        return Err(Error::DepthCapExceeded {
            depth: tree.depth(),
            cap: bound.min(MAX_TREE_DEPTH),
        });
    }
    let branching: Vec<usize> = (0..tree.depth())
        .filter(|&l| !feasible(tree, l, tree.level(l + 1)).is_empty())
        .collect();
    let mut s = Search {
        tree,
        branching,
        best: 0,
    };
    for bi in (0..s.branching.len()).rev() {
        if bi < s.best {
            break;
        }
        let l = s.branching[bi];
        let nodes = feasible(tree, l, tree.level(l + 1));
        s.descend(bi, &nodes, 1);
    }
    Ok(s.best)
}

pub fn leveled_subtree_depth(tree: &PrefixTree) -> Result<usize> {
    leveled_subtree_depth_bounded(tree, DEFAULT_LEVELED_BOUND)
}

/// `Σ_{i ≤ d} C(n, i)`, saturating.
pub fn binomial_prefix_sum(n: usize, d: usize) -> u128 {
    let mut sum = 0u128;
    let mut c = 1u128;
    for i in 0..=d.min(n) {
        sum = sum.saturating_add(c);
        c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    sum
}

/// Whether the leaves of `tree`, padded down to its depth `T`, number at most
/// `Σ_{i ≤ d} C(T, i)`.
pub fn leaf_count_bound_check(tree: &PrefixTree, d: usize) -> bool {
    let padded = tree.padded();
    padded.leaf_count() as u128 <= binomial_prefix_sum(padded.depth(), d)
}

/// A random tree with every leaf at `depth`: a per-tree probability `p` is
/// drawn uniformly, then each node branches with probability `p` and
/// otherwise keeps one uniformly chosen child.
pub fn random_leveled_tree<R: Rng + ?Sized>(depth: usize, rng: &mut R) -> Result<PrefixTree> {
    if depth > MAX_TREE_DEPTH {
        return Err(Error::DepthCapExceeded {
            depth,
            cap: MAX_TREE_DEPTH,
        });
    }
    let p: f64 = rng.gen();
    let mut levels = vec![vec![0u64]];
    for l in 0..depth {
        let mut next = Vec::new();
        for &v in &levels[l] {
            if rng.gen_bool(p) {
                next.push(v << 1);
                next.push((v << 1) | 1);
            } else {
                next.push((v << 1) | rng.gen_range(0..2));
            }
        }
        levels.push(next);
    }
    PrefixTree::from_levels(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tree(paths: &[&str]) -> PrefixTree {
        let p: Vec<_> = paths.iter().map(|s| bs(s)).collect();
        PrefixTree::from_paths(&p).unwrap()
    }

    #[test]
    fn basic_shapes() {
        for t in 0..8 {
            let c = PrefixTree::complete(t).unwrap();
            assert_eq!(leveled_subtree_depth(&c).unwrap(), t);
            assert!(leaf_count_bound_check(&c, t));
            assert_eq!(c.leaf_count() as u128, binomial_prefix_sum(t, t));
        }
        let path = tree(&["01101"]);
        assert_eq!(leveled_subtree_depth(&path).unwrap(), 0);
        assert!(leaf_count_bound_check(&path, 0));
    }

    #[test]
    fn depth_two_needs_common_levels() {
        // Both children of the root split on level 1.
        let t = tree(&["000", "010", "100", "110"]);
        assert_eq!(leveled_subtree_depth(&t).unwrap(), 2);
        // Branching on different levels only gives depth 1.
        let t = tree(&["00", "01", "100", "101"]);
        assert_eq!(leveled_subtree_depth(&t).unwrap(), 1);
        // Same with the embedding pushed deeper on one side.
        let t = tree(&["000", "001", "1100", "1101"]);
        assert_eq!(leveled_subtree_depth(&t).unwrap(), 1);
    }

    #[test]
    fn leveled_tree_embedded_in_a_larger_one() {
        // Complete down to level 3, with uneven tails below.
        let t = tree(&[
            "00000", "00100", "01001", "01101", "10010", "10110", "11011", "11111", "0111",
        ]);
        assert_eq!(leveled_subtree_depth(&t).unwrap(), 3);
    }

    #[test]
    fn bound_is_enforced() {
        let t = tree(&["00000000000000000"]);
        assert!(matches!(
            leveled_subtree_depth(&t),
            Err(Error::DepthCapExceeded { depth: 17, cap: 16 })
        ));
        assert_eq!(leveled_subtree_depth_bounded(&t, 20).unwrap(), 0);
    }

    #[test]
    fn random_trees_are_leveled() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_leveled_tree(10, &mut rng).unwrap();
            assert!(t.is_leveled());
            assert_eq!(t.depth(), 10);
            let d = leveled_subtree_depth(&t).unwrap();
            assert!(leaf_count_bound_check(&t, d));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_prefix_sum(10, 0), 1);
        assert_eq!(binomial_prefix_sum(10, 1), 11);
        assert_eq!(binomial_prefix_sum(10, 2), 56);
        assert_eq!(binomial_prefix_sum(4, 9), 16);
    }
}
