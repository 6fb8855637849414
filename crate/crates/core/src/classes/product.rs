use crate::bits::{Bit, BitString};
use crate::class::{check_cap, FiniteClass};
use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorKind, NextToken};

/// Prefix code of part `i` (1-based): `0^i 1`.
pub fn part_prefix(i: usize) -> BitString {
    BitString::zeros(i).appended(Bit::One)
}

/// Routes `0^i 1 ∘ z` to part `i` evaluated on `z`; all other strings map to 0.
pub fn eval(parts: &[Generator], x: &BitString) -> Result<Bit> {
    let i = x.leading_zeros();
    if i == 0 || i > parts.len() || x.get(i) != Some(Bit::One) {
        return Ok(Bit::Zero);
    }
    parts[i - 1].next_bit(&x.suffix_from(i + 1))
}

/// Horizon of a product: the tightest `i + 1 + H_i` over the parts.
pub fn product_horizon(part_horizons: &[usize]) -> usize {
    part_horizons
        .iter()
        .enumerate()
        .map(|(i, h)| i + 2 + h)
        .min()
        .unwrap_or(0)
}

/// One generator per tuple of part members. Order: lexicographic in the tuple
/// with part 1 most significant.
pub fn make_product_class(parts: &[FiniteClass], cap: u128) -> Result<FiniteClass> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("product needs at least one part".into()));
    }
    let size = parts
        .iter()
        .try_fold(1u128, |acc, p| acc.checked_mul(p.len() as u128))
        .unwrap_or(u128::MAX);
    check_cap(size, cap)?;
    let horizons: Vec<usize> = parts.iter().map(FiniteClass::horizon).collect();
    let horizon = product_horizon(&horizons);
    let mut gens = Vec::with_capacity(size as usize);
    let mut idx = vec![0usize; parts.len()];
    if size > 0 {
        loop {
            let tuple = idx
                .iter()
                .zip(parts)
                .map(|(&j, p)| p.generators()[j].clone())
                .collect();
            gens.push(Generator::new(GeneratorKind::Product { parts: tuple }, horizon));
            // Odometer, last part fastest.
            let mut pos = parts.len();
            loop {
                if pos == 0 {
                    return FiniteClass::new(horizon, gens);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < parts[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
    FiniteClass::new(horizon, gens)
}
