use crate::bits::{Bit, BitString};
use crate::class::{check_cap, FiniteClass};
use crate::error::Result;
use crate::generator::{Generator, GeneratorKind};

/// `f_b` with `b` truncated to `k_max` bits; `b.get(k-1)` is `b_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityParams {
    pub b: BitString,
}

impl ParityParams {
    pub fn k_max(&self) -> usize {
        self.b.len()
    }

    /// `b_k`, and 0 beyond the truncation.
    pub fn b_k(&self, k: usize) -> Bit {
        k.checked_sub(1)
            .and_then(|i| self.b.get(i))
            .unwrap_or(Bit::Zero)
    }

    /// Cases: `Q_k = 0^k1 ↦ b_k`; `A_{k,y,t} = 0^k1(y0)^t y ↦ 0`;
    /// `B_{k,y,t} = 0^k1(y0)^{t+1} ↦ y`; anything else `↦ 0`.
    pub fn eval(&self, x: &BitString) -> Bit {
        let k = x.leading_zeros();
        if k == 0 || x.get(k) != Some(Bit::One) {
            return Bit::Zero;
        }
        let rest = &x.bits()[k + 1..];
        let Some(&y) = rest.first() else {
            return self.b_k(k);
        };
        let alternating = rest
            .iter()
            .enumerate()
            .all(|(i, &c)| c == if i % 2 == 0 { y } else { Bit::Zero });
        if !alternating || rest.len() % 2 == 1 {
            Bit::Zero
        } else {
            y
        }
    }
}

/// `Q_k = 0^k 1`.
pub fn q_prompt(k: usize) -> BitString {
    BitString::zeros(k).appended(Bit::One)
}

/// One `f_b` per `b ∈ {0,1}^{k_max}`, ordered by `b` as a big-endian integer
/// (so `b_1` is the most significant bit).
pub fn make_parity_class(k_max: usize, horizon: usize, cap: u128) -> Result<FiniteClass> {
    check_cap(1u128.checked_shl(k_max as u32).unwrap_or(u128::MAX), cap)?;
    let gens = BitString::all_of_length(k_max)
        .map(|b| Generator::new(GeneratorKind::Parity(ParityParams { b }), horizon))
        .collect();
    FiniteClass::new(horizon, gens)
}
