//! Branch class over a perfect binary tree whose `i`-th node (breadth-first,
//! left to right, starting at 1) is labeled `0^i`.

use crate::bits::{Bit, BitString};
use crate::class::{check_cap, FiniteClass};
use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorKind};

/// Breadth-first index of the node at `level` and `pos` (0-based within level).
pub fn node_index(level: usize, pos: u64) -> u64 {
    (1u64 << level) + pos
}

/// Label string `0^i` of node `i`.
pub fn node_label(level: usize, pos: u64) -> BitString {
    BitString::zeros(node_index(level, pos) as usize)
}

/// `f_B(0^i)`: the branch's direction at node `i` when `B` passes through it,
/// else 0.
pub fn eval_branch(depth: usize, branch: &BitString, x: &BitString) -> Bit {
    let i = x.len() as u64;
    if i == 0 || !x.is_all_zero() || i >= 1u64 << depth {
        return Bit::Zero;
    }
    let level = 63 - i.leading_zeros() as usize;
    let pos = i - (1u64 << level);
    if branch.prefix(level).to_u64() == pos {
        branch.get(level).unwrap_or(Bit::Zero)
    } else {
        Bit::Zero
    }
}

/// One generator per root-to-leaf branch of the depth-`D` tree, ordered by
/// the branch's direction bits. Labels reach length `2^D - 1`, so the horizon
/// must exceed that.
pub fn make_atdim_example_class(depth: usize, horizon: usize, cap: u128) -> Result<FiniteClass> {
    if depth == 0 || depth > 20 {
        return Err(Error::InvalidArgument(format!(
            "tree depth {depth} outside 1..=20"
        )));
    }
    check_cap(1u128 << depth, cap)?;
    let needed = 1usize << depth;
    if horizon < needed {
        return Err(Error::HorizonTooSmall { horizon, needed });
    }
    let gens = BitString::all_of_length(depth)
        .map(|branch| Generator::new(GeneratorKind::BranchTree { depth, branch }, horizon))
        .collect();
    FiniteClass::new(horizon, gens)
}
