use std::collections::HashSet;

use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::generator::{cot_trace, Generator, NextToken};

/// Default cap on the number of generators a constructor may enumerate.
pub const DEFAULT_CAP: u128 = 1 << 20;

pub(crate) fn check_cap(requested: u128, cap: u128) -> Result<()> {
    if requested > cap {
        Err(Error::EnumerationTooLarge { requested, cap })
    } else {
        Ok(())
    }
}

/// An ordered, enumerable family of generators sharing one horizon.
///
/// The order is part of the contract: ERM picks the first consistent member.
/// Extensionally equal members are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteClass {
    generators: Vec<Generator>,
    horizon: usize,
}

impl FiniteClass {
    pub fn new(horizon: usize, generators: Vec<Generator>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.horizon() != horizon) {
            return Err(Error::InvalidArgument(format!(
                "generator {} has horizon {}, class horizon is {horizon}",
                g.describe(),
                g.horizon()
            )));
        }
        Ok(Self {
            generators,
            horizon,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, i: usize) -> Option<&Generator> {
        self.generators.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Generator> {
        self.generators.iter()
    }

    /// Sub-class of the members at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let gens = indices
            .iter()
            .map(|&i| {
                self.generators.get(i).cloned().ok_or_else(|| {
                    Error::InvalidArgument(format!("index {i} out of range {}", self.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.horizon, gens)
    }

    /// Keeps the first member of every group that produces identical
    /// length-`t` traces on all of `prompts`.
    pub fn dedup_by_behaviour(&self, prompts: &[BitString], t: usize) -> Result<Self> {
        let signatures: Vec<Vec<BitString>> = self
            .generators
            .par_iter()
            .map(|g| prompts.iter().map(|x| cot_trace(g, x, t)).collect())
            .collect::<Result<_>>()?;
        let mut seen = HashSet::new();
        let gens = self
            .generators
            .iter()
            .zip(signatures)
            .filter(|(_, sig)| seen.insert(sig.clone()))
            .map(|(g, _)| g.clone())
            .collect();
        Self::new(self.horizon, gens)
    }
}

impl<'a> IntoIterator for &'a FiniteClass {
    type Item = &'a Generator;
    type IntoIter = std::slice::Iter<'a, Generator>;

    fn into_iter(self) -> Self::IntoIter {
        self.generators.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bs, Bit};

    #[test]
    fn mixed_horizons_are_rejected() {
        let gens = vec![
            Generator::constant(Bit::Zero, 4),
            Generator::constant(Bit::One, 5),
        ];
        assert!(FiniteClass::new(4, gens).is_err());
    }

    #[test]
    fn dedup_keeps_first_in_order() {
        let gens = vec![
            Generator::constant(Bit::Zero, 4),
            Generator::constant(Bit::One, 4),
            Generator::constant(Bit::Zero, 4),
        ];
        let class = FiniteClass::new(4, gens).unwrap();
        let d = class.dedup_by_behaviour(&[bs("")], 2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.get(0), class.get(0));
        assert_eq!(d.get(1), class.get(1));
    }
}
