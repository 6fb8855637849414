use crate::bits::{Bit, BitString};
use crate::class::{check_cap, FiniteClass};
use crate::classes::rate::IntervalSet;
use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorKind};

/// `f_{s+A}`: reveals the indicator sequence of `s + A` (1-based positions)
/// along its own prefix chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftedSubsetParams {
    pub shift: u64,
    /// Sorted members of `A`.
    pub members: Vec<u64>,
}

impl ShiftedSubsetParams {
    fn in_shifted(&self, pos: u64) -> bool {
        pos > self.shift && self.members.binary_search(&(pos - self.shift)).is_ok()
    }

    /// The indicator sequence truncated to `len` positions.
    pub fn indicator(&self, len: usize) -> BitString {
        (1..=len as u64).map(|p| Bit::from(self.in_shifted(p))).collect()
    }

    pub fn eval(&self, x: &BitString) -> Bit {
        // x must agree with the indicator on positions 1..=|x|: its ones are
        // exactly the members of s + A up to |x|.
        let len = x.len() as u64;
        let mut expected = self
            .members
            .iter()
            .map(|a| a + self.shift)
            .take_while(|&p| p <= len)
            .peekable();
        for (i, b) in x.iter().enumerate() {
            let pos = i as u64 + 1;
            let want = expected.peek() == Some(&pos);
            if want {
                expected.next();
            }
            if b.is_one() != want {
                return Bit::Zero;
            }
        }
        Bit::from(self.in_shifted(len + 1))
    }
}

/// `F(N)` truncated to shifts `s ≤ s_max`.
///
/// Order: `s` ascending, then `A` by bitmask over the members of `N`
/// (bit `j` selects the `j`-th smallest member). Pairs `(s, ∅)` are all kept.
pub fn make_shifted_subset_class(
    n: &IntervalSet,
    s_max: u64,
    horizon: usize,
    cap: u128,
) -> Result<FiniteClass> {
    let subsets = 1u128
        .checked_shl(n.len() as u32)
        .filter(|_| n.len() < 100)
        .unwrap_or(u128::MAX);
    check_cap(subsets.saturating_mul(s_max as u128 + 1), cap)?;
    let needed = n.max().unwrap_or(0) + s_max;
    if needed > horizon as u64 {
        return Err(Error::HorizonTooSmall {
            horizon,
            needed: needed as usize,
        });
    }
    let m = n.members();
    let mut gens = Vec::with_capacity((subsets as usize) * (s_max as usize + 1));
    for s in 0..=s_max {
        for mask in 0..(1u64 << m.len()) {
            let members = (0..m.len())
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| m[j])
                .collect();
            gens.push(Generator::new(
                GeneratorKind::ShiftedSubset(ShiftedSubsetParams { shift: s, members }),
                horizon,
            ));
        }
    }
    FiniteClass::new(horizon, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::class::DEFAULT_CAP;
    use crate::generator::{e2e_output, NextToken};

    fn p(shift: u64, members: &[u64]) -> ShiftedSubsetParams {
        ShiftedSubsetParams {
            shift,
            members: members.to_vec(),
        }
    }

    #[test]
    fn indicator_of_three() {
        let f = p(1, &[2]);
        assert_eq!(f.indicator(5), bs("00100"));
        assert_eq!(f.eval(&bs("00")), Bit::One);
        assert_eq!(f.eval(&bs("0")), Bit::Zero);
        assert_eq!(f.eval(&bs("001")), Bit::Zero);
        // Off the chain.
        assert_eq!(f.eval(&bs("01")), Bit::Zero);
        assert_eq!(f.eval(&bs("1")), Bit::Zero);
    }

    #[test]
    fn empty_subset_is_constant_zero() {
        for s in 0..4 {
            let f = p(s, &[]);
            for x in ["", "0", "1", "0000", "101"] {
                assert_eq!(f.eval(&bs(x)), Bit::Zero);
            }
        }
    }

    #[test]
    fn lower_bound_witness() {
        let f = Generator::new(GeneratorKind::ShiftedSubset(p(4, &[1])), 16);
        assert_eq!(e2e_output(&f, &bs("0"), 4).unwrap(), Bit::One);
    }

    #[test]
    fn class_shape_and_errors() {
        let n = IntervalSet::new(vec![1, 3, 4]).unwrap();
        let c = make_shifted_subset_class(&n, 2, 8, DEFAULT_CAP).unwrap();
        assert_eq!(c.len(), 3 * 8);
        let g = c.get(8 + 5).unwrap();
        assert_eq!(g.describe(), "shift(1+[1, 4])");
        assert!(matches!(
            make_shifted_subset_class(&n, 5, 8, DEFAULT_CAP),
            Err(Error::HorizonTooSmall { needed: 9, .. })
        ));
        assert!(matches!(
            make_shifted_subset_class(&n, 2, 8, 10),
            Err(Error::EnumerationTooLarge { .. })
        ));
        assert!(c.get(0).unwrap().next_bit(&bs("00000000")).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn eval_matches_prefix_definition(
                shift in 0u64..6,
                a in proptest::collection::btree_set(1u64..8, 0..5),
                x in proptest::collection::vec(any::<bool>(), 0..14),
            ) {
                let f = p(shift, &a.into_iter().collect::<Vec<_>>());
                let x: BitString = x.into_iter().map(Bit::from).collect();
                let ind = f.indicator(x.len() + 1);
                let want = if x.is_prefix_of(&ind) { ind.get(x.len()).unwrap() } else { Bit::Zero };
                prop_assert_eq!(f.eval(&x), want);
            }
        }
    }
}
