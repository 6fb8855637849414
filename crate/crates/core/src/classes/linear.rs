use std::fmt;

use num_rational::Rational64;

use crate::bits::{Bit, BitString};
use crate::class::{check_cap, FiniteClass};
use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorKind};

/// Threshold over the last `d` bits: `f(x) = [w · tail_d(x) + b ≥ 0]`.
///
/// `w[j]` multiplies the `j`-th bit of the left-zero-padded tail, so `w[d-1]`
/// weighs the most recent symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearParams {
    pub w: Vec<Rational64>,
    pub b: Rational64,
}

impl LinearParams {
    pub fn new(w: Vec<Rational64>, b: Rational64) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidArgument("linear window d must be ≥ 1".into()));
        }
        Ok(Self { w, b })
    }

    pub fn from_ints(w: &[i64], b: i64) -> Result<Self> {
        Self::new(w.iter().map(|&v| Rational64::from_integer(v)).collect(), b.into())
    }

    pub fn d(&self) -> usize {
        self.w.len()
    }

    pub fn score(&self, x: &BitString) -> Rational64 {
        let d = self.d();
        let n = x.len();
        let mut acc = self.b;
        for i in 1..=d.min(n) {
            if x.get(n - i) == Some(Bit::One) {
                acc += self.w[d - i];
            }
        }
        acc
    }

    pub fn eval(&self, x: &BitString) -> Bit {
        Bit::from(self.score(x) >= Rational64::from_integer(0))
    }
}

impl fmt::Display for LinearParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.w.iter().map(|v| v.to_string()).collect();
        write!(f, "w=[{}],b={}", w.join(" "), self.b)
    }
}

/// `tail_d(x)`: the last `d` bits of `x`, zero-padded on the left.
pub fn tail(x: &BitString, d: usize) -> Vec<i64> {
    let n = x.len();
    (0..d)
        .map(|j| {
            // Position j of the window corresponds to x[n - d + j].
            (n + j).checked_sub(d).and_then(|i| x.get(i)).map_or(0, |b| b.as_u8() as i64)
        })
        .collect()
}

pub fn make_linear_generator(p: LinearParams, horizon: usize) -> Generator {
    Generator::new(GeneratorKind::Linear(p), horizon)
}

/// All integer parameters with entries in `[-bound, bound]`.
///
/// Order: odometer over `(w_1, …, w_d, b)` with `b` varying fastest, each
/// coordinate ascending from `-bound`.
pub fn enumerate_linear_class(
    d: usize,
    weight_bound: u64,
    horizon: usize,
    cap: u128,
) -> Result<FiniteClass> {
    if d == 0 {
        return Err(Error::InvalidArgument("linear window d must be ≥ 1".into()));
    }
    let side = 2 * weight_bound as u128 + 1;
    let size = (0..=d).try_fold(1u128, |acc, _| acc.checked_mul(side));
    check_cap(size.unwrap_or(u128::MAX), cap)?;
    let size = size.unwrap_or(0) as usize;
    let lo = -(weight_bound as i64);
    let side = side as usize;
    let gens = (0..size)
        .map(|mut idx| {
            let mut coords = vec![0i64; d + 1];
            for c in coords.iter_mut().rev() {
                *c = lo + (idx % side) as i64;
                idx /= side;
            }
            let b = coords.pop().unwrap();
            make_linear_generator(LinearParams::from_ints(&coords, b).unwrap(), horizon)
        })
        .collect();
    FiniteClass::new(horizon, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::class::DEFAULT_CAP;
    use crate::generator::NextToken;

    #[test]
    fn unit_threshold() {
        let p = LinearParams::from_ints(&[1], -1).unwrap();
        assert_eq!(p.eval(&bs("0")), Bit::Zero);
        assert_eq!(p.eval(&bs("1")), Bit::One);
        assert_eq!(p.eval(&bs("10")), Bit::Zero);
        assert_eq!(p.eval(&bs("")), Bit::Zero);
    }

    #[test]
    fn empty_input_reads_bias() {
        let p = LinearParams::from_ints(&[-3, 5], 0).unwrap();
        assert_eq!(p.eval(&bs("")), Bit::One);
        let z = LinearParams::from_ints(&[0, 0], -1).unwrap();
        for x in ["", "1", "11", "0101"] {
            assert_eq!(z.eval(&bs(x)), Bit::Zero);
        }
    }

    #[test]
    fn weights_align_with_tail() {
        // Only the second-to-last bit matters.
        let p = LinearParams::from_ints(&[1, 0], -1).unwrap();
        assert_eq!(p.eval(&bs("10")), Bit::One);
        assert_eq!(p.eval(&bs("01")), Bit::Zero);
        assert_eq!(p.eval(&bs("1")), Bit::Zero);
        assert_eq!(tail(&bs("1"), 3), vec![0, 0, 1]);
        assert_eq!(tail(&bs("10110"), 3), vec![1, 1, 0]);
    }

    #[test]
    fn grid() {
        let c = enumerate_linear_class(1, 1, 4, DEFAULT_CAP).unwrap();
        assert_eq!(c.len(), 9);
        let outs: Vec<Vec<Bit>> = c
            .iter()
            .map(|g| ["", "0", "1"].iter().map(|x| g.next_bit(&bs(x)).unwrap()).collect())
            .collect();
        assert!(outs.contains(&vec![Bit::Zero; 3]));
        assert!(outs.contains(&vec![Bit::One; 3]));
        assert!(enumerate_linear_class(3, 10, 4, 100).is_err());
        assert!(enumerate_linear_class(0, 1, 4, DEFAULT_CAP).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn zero_padding_is_invisible(
                w in proptest::collection::vec(-4i64..5, 1..4),
                b in -4i64..5,
                x in proptest::collection::vec(any::<bool>(), 0..10),
            ) {
                let p = LinearParams::from_ints(&w, b).unwrap();
                let x: BitString = x.into_iter().map(Bit::from).collect();
                if x.len() >= p.d() {
                    let padded = bs("0").concat(&x);
                    prop_assert_eq!(p.eval(&x), p.eval(&padded));
                }
                // Short inputs behave as if padded up to the window.
                let full = BitString::zeros(p.d()).concat(&x);
                prop_assert_eq!(p.eval(&x), p.eval(&full));
            }
        }
    }
}
