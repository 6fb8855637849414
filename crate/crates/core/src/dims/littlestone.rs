use std::collections::HashMap;

use crate::class::FiniteClass;
use crate::dims::{restrict_base, Domain, PatternSet};
use crate::error::Result;

pub const DEFAULT_DEPTH_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Littlestone {
    pub value: usize,
    /// The search stopped at the cap; the true dimension may be larger.
    pub truncated: bool,
}

struct Game {
    /// `ones[x]`: version-set bitmask of the patterns labeling point `x` with 1.
    ones: Vec<Vec<u64>>,
    cap: usize,
    memo: HashMap<Vec<u64>, usize>,
}

fn popcount(v: &[u64]) -> u32 {
    v.iter().map(|w| w.count_ones()).sum()
}

impl Game {
    /// `min(L(V), cap)` by the minimax recursion.
    fn value(&mut self, v: &[u64]) -> usize {
        let n = popcount(v);
        if n <= 1 {
            return 0;
        }
        if let Some(&r) = self.memo.get(v) {
            return r;
        }
        let ceiling = (31 - n.leading_zeros()) as usize;
        let ceiling = ceiling.min(self.cap);
        let mut best = 0;
        for x in 0..self.ones.len() {
            if best >= ceiling {
                break;
            }
            let v1: Vec<u64> = v.iter().zip(&self.ones[x]).map(|(a, b)| a & b).collect();
            let c1 = popcount(&v1);
            if c1 == 0 || c1 == n {
                continue;
            }
            let v0: Vec<u64> = v.iter().zip(&self.ones[x]).map(|(a, b)| a & !b).collect();
            // Both sides must reach `best` for this point to improve on it.
            let small = c1.min(n - c1);
            if ((31 - small.leading_zeros()) as usize) < best {
                continue;
            }
            let a = self.value(&v1);
            if a < best {
                continue;
            }
            let b = self.value(&v0);
            best = best.max(1 + a.min(b));
        }
        let best = best.min(self.cap);
        self.memo.insert(v.to_vec(), best);
        best
    }
}

/// Exact Littlestone dimension of a binary pattern set, capped at `depth_cap`.
pub fn littlestone_of_patterns(p: &PatternSet, depth_cap: usize) -> Littlestone {
    let p = if p.is_binary() {
        p.clone()
    } else {
        p.last_bit_projection()
    };
    let n = p.len();
    let words = n.div_ceil(64).max(1);
    let ones = (0..p.width())
        .map(|x| {
            let mut m = vec![0u64; words];
            for (i, pat) in p.patterns().iter().enumerate() {
                if pat[x] == 1 {
                    m[i / 64] |= 1 << (i % 64);
                }
            }
            m
        })
        .collect();
    let mut all = vec![0u64; words];
    for i in 0..n {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut game = Game {
        ones,
        cap: depth_cap,
        memo: HashMap::new(),
    };
    let value = game.value(&all);
    let log_bound = if n <= 1 { 0 } else { (usize::BITS - 1 - n.leading_zeros()) as usize };
    Littlestone {
        value,
        truncated: value == depth_cap && log_bound > depth_cap,
    }
}

/// Littlestone dimension of the base class restricted to `D`.
pub fn littlestone_dimension(
    class: &FiniteClass,
    d: &Domain,
    depth_cap: usize,
) -> Result<Littlestone> {
    Ok(littlestone_of_patterns(&restrict_base(class, d)?, depth_cap))
}
