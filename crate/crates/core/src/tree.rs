//! Generation trees, realized trace tries and the prefix-tree shape shared by
//! the leveled-subtree machinery.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bits::BitString;
use crate::class::FiniteClass;
use crate::error::{Error, Result};
use crate::generator::cot_trace;

/// Largest depth representable by [`PrefixTree`] (node paths are packed in `u64`).
pub const MAX_TREE_DEPTH: usize = 63;

/// A rooted, prefix-closed binary tree. Nodes are stored per level as sorted
/// path integers: the node reached by edge labels `p_1 … p_l` sits at level
/// `l` with position `p_1 … p_l` read as a big-endian number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTree {
    levels: Vec<Vec<u64>>,
}

impl PrefixTree {
    /// Tree whose nodes are all prefixes of the given paths (the root included).
    pub fn from_paths<'a>(paths: impl IntoIterator<Item = &'a BitString>) -> Result<Self> {
        let mut levels: Vec<Vec<u64>> = vec![vec![0]];
        for p in paths {
            if p.len() > MAX_TREE_DEPTH {
                return Err(Error::DepthCapExceeded {
                    depth: p.len(),
                    cap: MAX_TREE_DEPTH,
                });
            }
            if levels.len() <= p.len() {
                levels.resize(p.len() + 1, Vec::new());
            }
            let mut pos = 0u64;
            for (i, b) in p.iter().enumerate() {
                pos = (pos << 1) | b.as_u8() as u64;
                levels[i + 1].push(pos);
            }
        }
        for level in &mut levels {
            level.sort_unstable();
            level.dedup();
        }
        Ok(Self { levels })
    }

    /// The complete binary tree of the given depth.
    pub fn complete(depth: usize) -> Result<Self> {
        if depth > 24 {
            return Err(Error::DepthCapExceeded { depth, cap: 24 });
        }
        let levels = (0..=depth).map(|l| (0..(1u64 << l)).collect()).collect();
        Ok(Self { levels })
    }

    /// Builds directly from per-level position lists; the caller guarantees
    /// prefix closure. Used by generators of random trees.
    pub fn from_levels(mut levels: Vec<Vec<u64>>) -> Result<Self> {
        if levels.is_empty() {
            levels.push(vec![0]);
        }
        for level in &mut levels {
            level.sort_unstable();
            level.dedup();
        }
        while levels.len() > 1 && levels.last().is_some_and(|l| l.is_empty()) {
            levels.pop();
        }
        for l in 1..levels.len() {
            let parents = &levels[l - 1];
            if levels[l].iter().any(|p| parents.binary_search(&(p >> 1)).is_err()) {
                return Err(Error::InvalidArgument(format!(
                    "level {l} has a node without parent"
                )));
            }
        }
        Ok(Self { levels })
    }

    /// Deepest level holding a node.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, l: usize) -> &[u64] {
        self.levels.get(l).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn levels(&self) -> &[Vec<u64>] {
        &self.levels
    }

    pub fn contains(&self, level: usize, pos: u64) -> bool {
        self.level(level).binary_search(&pos).is_ok()
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Nodes without children.
    pub fn leaf_count(&self) -> usize {
        (0..self.levels.len())
            .map(|l| {
                self.level(l)
                    .iter()
                    .filter(|&&p| {
                        !self.contains(l + 1, p << 1) && !self.contains(l + 1, (p << 1) | 1)
                    })
                    .count()
            })
            .sum()
    }

    /// True when every leaf sits at the deepest level.
    pub fn is_leveled(&self) -> bool {
        self.leaf_count() == self.level(self.depth()).len()
    }

    /// Extends every shallow leaf by a path of zeros down to the deepest level.
    /// Leaf count is unchanged.
    pub fn padded(&self) -> Self {
        let depth = self.depth();
        let mut levels = self.levels.clone();
        for l in 0..depth {
            let leaves: Vec<u64> = self.levels[l]
                .iter()
                .copied()
                .filter(|&p| !self.contains(l + 1, p << 1) && !self.contains(l + 1, (p << 1) | 1))
                .collect();
            for p in leaves {
                let mut q = p;
                for level in levels.iter_mut().take(depth + 1).skip(l + 1) {
                    q <<= 1;
                    level.push(q);
                }
            }
        }
        for level in &mut levels {
            level.sort_unstable();
            level.dedup();
        }
        Self { levels }
    }

    /// Path strings of all nodes, level by level.
    pub fn node_paths(&self) -> Vec<BitString> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(l, ps)| ps.iter().map(move |&p| BitString::from_u64(p, l)))
            .collect()
    }
}

/// The complete tree of all `T`-step continuations of a prompt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationTree {
    prompt: BitString,
    depth: usize,
}

impl GenerationTree {
    pub fn prompt(&self) -> &BitString {
        &self.prompt
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node_count(&self) -> u128 {
        (1u128 << (self.depth + 1)) - 1
    }

    /// Node strings in level order, left to right.
    pub fn nodes(&self) -> Vec<BitString> {
        (0..=self.depth)
            .flat_map(|l| BitString::all_of_length(l).map(|p| self.prompt.concat(&p)))
            .collect()
    }

    pub fn leaves(&self) -> Vec<BitString> {
        BitString::all_of_length(self.depth)
            .map(|p| self.prompt.concat(&p))
            .collect()
    }

    pub fn shape(&self) -> Result<PrefixTree> {
        PrefixTree::complete(self.depth)
    }
}

/// `T_T(x)`: node at path `p` carries `x ∘ p`.
pub fn full_generation_tree(x: &BitString, t: usize) -> GenerationTree {
    GenerationTree {
        prompt: x.clone(),
        depth: t,
    }
}

/// Prefix tree of the traces a class actually produces from one prompt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTrie {
    prompt: BitString,
    depth: usize,
    /// Realized trace and the index of the first class member producing it.
    branches: BTreeMap<BitString, usize>,
}

impl TraceTrie {
    pub fn prompt(&self) -> &BitString {
        &self.prompt
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> impl Iterator<Item = &BitString> {
        self.branches.keys()
    }

    pub fn witness(&self, branch: &BitString) -> Option<usize> {
        self.branches.get(branch).copied()
    }

    pub fn contains_branch(&self, branch: &BitString) -> bool {
        self.branches.contains_key(branch)
    }

    pub fn shape(&self) -> Result<PrefixTree> {
        PrefixTree::from_paths(self.branches.keys())
    }
}

/// `B_F(T_T(x))`: the set of realized length-`t` traces, each with a witness.
pub fn realized_trace_tree(class: &FiniteClass, x: &BitString, t: usize) -> Result<TraceTrie> {
    let traces: Vec<BitString> = class
        .generators()
        .par_iter()
        .map(|f| cot_trace(f, x, t))
        .collect::<Result<_>>()?;
    let mut branches = BTreeMap::new();
    for (i, tr) in traces.into_iter().enumerate() {
        branches.entry(tr).or_insert(i);
    }
    Ok(TraceTrie {
        prompt: x.clone(),
        depth: t,
        branches,
    })
}

/// Checks the witness stored for every branch.
pub fn verify_witnesses(class: &FiniteClass, trie: &TraceTrie) -> Result<bool> {
    for (branch, &i) in &trie.branches {
        let f = class
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("witness {i} out of range")))?;
        if &cot_trace(f, &trie.prompt, trie.depth)? != branch {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bs, Bit};
    use crate::generator::Generator;

    #[test]
    fn full_tree_examples() {
        let t = full_generation_tree(&bs("0"), 2);
        assert_eq!(t.node_count(), 7);
        assert_eq!(t.nodes().len(), 7);
        assert_eq!(t.leaves(), vec![bs("000"), bs("001"), bs("010"), bs("011")]);
        let t = full_generation_tree(&bs(""), 0);
        assert_eq!(t.nodes(), vec![bs("")]);
        let t = full_generation_tree(&bs("1"), 1);
        assert_eq!(t.nodes(), vec![bs("1"), bs("10"), bs("11")]);
        for n in full_generation_tree(&bs("01"), 3).nodes() {
            assert!(n.len() >= 2 && n.len() <= 5);
        }
    }

    #[test]
    fn realized_tree_of_constants() {
        let class = FiniteClass::new(
            4,
            vec![
                Generator::constant(Bit::Zero, 4),
                Generator::constant(Bit::One, 4),
                Generator::constant(Bit::Zero, 4),
            ],
        )
        .unwrap();
        let trie = realized_trace_tree(&class, &bs(""), 2).unwrap();
        let branches: Vec<_> = trie.branches().cloned().collect();
        assert_eq!(branches, vec![bs("00"), bs("11")]);
        assert_eq!(trie.witness(&bs("00")), Some(0));
        assert!(verify_witnesses(&class, &trie).unwrap());
    }

    #[test]
    fn prefix_tree_counts() {
        let t = PrefixTree::from_paths(&[bs("00"), bs("01"), bs("11")]).unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.node_count(), 6);
        assert_eq!(t.leaf_count(), 3);
        assert!(t.is_leveled());
        let c = PrefixTree::complete(3).unwrap();
        assert_eq!(c.node_count(), 15);
        assert_eq!(c.leaf_count(), 8);
    }

    #[test]
    fn padding_keeps_leaf_count() {
        let t = PrefixTree::from_paths(&[bs("0"), bs("111")]).unwrap();
        assert!(!t.is_leveled());
        let p = t.padded();
        assert!(p.is_leveled());
        assert_eq!(p.leaf_count(), t.leaf_count());
        assert_eq!(p.depth(), 3);
    }

    #[test]
    fn from_levels_rejects_orphans() {
        assert!(PrefixTree::from_levels(vec![vec![0], vec![1], vec![0]]).is_err());
        assert!(PrefixTree::from_levels(vec![vec![0], vec![1], vec![2, 3]]).is_ok());
    }
}
