//! Combinatorial dimensions of finite restrictions.
//!
//! Everything here works on an explicit [`Domain`]; the computed value is the
//! dimension of the restricted class, a lower bound on the unrestricted one.

pub mod atdim;
pub mod leveled;
pub mod littlestone;
pub mod shatter;

use std::collections::HashSet;

use rayon::prelude::*;

use crate::bits::{Bit, BitString};
use crate::class::FiniteClass;
use crate::error::{Error, Result};
use crate::generator::{cot_trace, e2e_output, NextToken};

pub use atdim::{arl_bound_check, atdim_realized, atdim_shattered, ArlCheck};
pub use leveled::{
    leaf_count_bound_check, leveled_subtree_depth, leveled_subtree_depth_bounded,
    random_leveled_tree, DEFAULT_LEVELED_BOUND,
};
pub use littlestone::{littlestone_dimension, Littlestone, DEFAULT_DEPTH_CAP};
pub use shatter::{dual_vc_dimension, growth_function, natarajan_dimension, vc_dimension};

/// An ordered list of distinct prompts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    prompts: Vec<BitString>,
}

impl Domain {
    pub fn new(prompts: Vec<BitString>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(dup) = prompts.iter().find(|p| !seen.insert(*p)) {
            return Err(Error::InvalidArgument(format!(
                "duplicate prompt {dup:?} in domain"
            )));
        }
        Ok(Self { prompts })
    }

    /// `0^1, …, 0^k`.
    pub fn chain(k: usize) -> Self {
        Self {
            prompts: (1..=k).map(BitString::zeros).collect(),
        }
    }

    /// All strings of length at most `n`, shortest first.
    pub fn all_up_to(n: usize) -> Self {
        Self {
            prompts: (0..=n).flat_map(BitString::all_of_length).collect(),
        }
    }

    pub fn prompts(&self) -> &[BitString] {
        &self.prompts
    }

    pub fn len(&self) -> usize {
        self.prompts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prompts.is_empty()
    }

    /// The sub-domain at the given coordinates.
    pub fn select(&self, coords: &[usize]) -> Self {
        Self {
            prompts: coords.iter().map(|&i| self.prompts[i].clone()).collect(),
        }
    }

    pub fn max_len(&self) -> usize {
        self.prompts.iter().map(BitString::len).max().unwrap_or(0)
    }
}

/// The distinct label vectors a class induces on a domain.
///
/// Labels are packed into `u64`: a bit for e2e restrictions, a big-endian
/// trace of `label_bits` symbols for CoT restrictions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    width: usize,
    label_bits: usize,
    patterns: Vec<Vec<u64>>,
}

impl PatternSet {
    /// Sorts and deduplicates.
    pub fn new(width: usize, label_bits: usize, mut patterns: Vec<Vec<u64>>) -> Result<Self> {
        if label_bits == 0 || label_bits > 63 {
            return Err(Error::InvalidArgument(format!(
                "label width {label_bits} outside 1..=63"
            )));
        }
        if patterns.iter().any(|p| p.len() != width) {
            return Err(Error::InvalidArgument("pattern of wrong length".into()));
        }
        if patterns.iter().flatten().any(|&l| l >> label_bits != 0) {
            return Err(Error::InvalidArgument("label wider than declared".into()));
        }
        patterns.par_sort_unstable();
        patterns.dedup();
        Ok(Self {
            width,
            label_bits,
            patterns,
        })
    }

    /// Binary patterns from rows of bits.
    pub fn from_bits(rows: &[Vec<Bit>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        let pats = rows
            .iter()
            .map(|r| r.iter().map(|b| b.as_u8() as u64).collect())
            .collect();
        Self::new(width, 1, pats)
    }

    /// Number of domain points.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn label_bits(&self) -> usize {
        self.label_bits
    }

    pub fn is_binary(&self) -> bool {
        self.label_bits == 1
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Vec<u64>] {
        &self.patterns
    }

    /// Keeps the first `bits` symbols of every trace label.
    pub fn truncate_labels(&self, bits: usize) -> Result<Self> {
        if bits == 0 || bits > self.label_bits {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate {}-symbol labels to {bits}",
                self.label_bits
            )));
        }
        let shift = self.label_bits - bits;
        let pats = self
            .patterns
            .iter()
            .map(|p| p.iter().map(|l| l >> shift).collect())
            .collect();
        Self::new(self.width, bits, pats)
    }

    /// The first generated symbol of every trace.
    pub fn first_bit_projection(&self) -> Self {
        self.truncate_labels(1).expect("labels have at least one symbol")
    }

    /// Keeps the last symbol of every trace.
    pub fn last_bit_projection(&self) -> Self {
        let pats = self
            .patterns
            .iter()
            .map(|p| p.iter().map(|l| l & 1).collect())
            .collect();
        Self::new(self.width, 1, pats).expect("bits are valid labels")
    }

    /// Restriction to a subset of coordinates.
    pub fn project(&self, coords: &[usize]) -> Self {
        let pats = self
            .patterns
            .iter()
            .map(|p| coords.iter().map(|&c| p[c]).collect())
            .collect();
        Self::new(coords.len(), self.label_bits, pats).expect("projection stays valid")
    }

    /// Adds patterns, keeping the set canonical.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if other.width != self.width || other.label_bits != self.label_bits {
            return Err(Error::InvalidArgument("incompatible pattern sets".into()));
        }
        let mut pats = self.patterns.clone();
        pats.extend(other.patterns.iter().cloned());
        Self::new(self.width, self.label_bits, pats)
    }
}

fn check_domain_horizon(class: &FiniteClass, d: &Domain, t: usize) -> Result<()> {
    let need = d.max_len() + t;
    if !d.is_empty() && need > class.horizon() {
        return Err(Error::HorizonExceeded {
            len: need - 1,
            horizon: class.horizon(),
        });
    }
    Ok(())
}

/// `{ (e2e_output(f, x, T))_{x ∈ D} : f ∈ F }`.
pub fn restrict_e2e(class: &FiniteClass, d: &Domain, t: usize) -> Result<PatternSet> {
    check_domain_horizon(class, d, t)?;
    let pats = class
        .generators()
        .par_iter()
        .map(|f| {
            d.prompts()
                .iter()
                .map(|x| e2e_output(f, x, t).map(|b| b.as_u8() as u64))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PatternSet::new(d.len(), 1, pats)
}

/// `{ (cot_trace(f, x, T))_{x ∈ D} : f ∈ F }` with traces packed big-endian.
pub fn restrict_cot(class: &FiniteClass, d: &Domain, t: usize) -> Result<PatternSet> {
    if t > 63 {
        return Err(Error::InvalidArgument(format!("trace length {t} exceeds 63")));
    }
    check_domain_horizon(class, d, t)?;
    let pats = class
        .generators()
        .par_iter()
        .map(|f| {
            d.prompts()
                .iter()
                .map(|x| cot_trace(f, x, t).map(|tr| tr.to_u64()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PatternSet::new(d.len(), t, pats)
}

/// The base class on `D`: `f(x)` itself.
pub fn restrict_base(class: &FiniteClass, d: &Domain) -> Result<PatternSet> {
    let pats = class
        .generators()
        .par_iter()
        .map(|f| {
            d.prompts()
                .iter()
                .map(|x| f.next_bit(x).map(|b| b.as_u8() as u64))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PatternSet::new(d.len(), 1, pats)
}
