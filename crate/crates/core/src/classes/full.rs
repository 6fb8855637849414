use crate::bits::BitString;
use crate::class::{check_cap, FiniteClass};
use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorKind};

/// Largest horizon accepted by [`make_full_class`].
pub const FULL_CLASS_MAX_HORIZON: usize = 20;

/// One prefix-reveal generator `f_a` per `a ∈ {0,1}^H`, ordered by `a`.
pub fn make_full_class(horizon: usize, cap: u128) -> Result<FiniteClass> {
    if horizon < 2 {
        return Err(Error::HorizonTooSmall { horizon, needed: 2 });
    }
    if horizon > FULL_CLASS_MAX_HORIZON {
        return Err(Error::EnumerationTooLarge {
            requested: 1u128 << horizon.min(127),
            cap: cap.min(1 << FULL_CLASS_MAX_HORIZON),
        });
    }
    check_cap(1u128 << horizon, cap)?;
    let gens = BitString::all_of_length(horizon)
        .map(|a| Generator::new(GeneratorKind::PrefixReveal { sequence: a }, horizon))
        .collect();
    FiniteClass::new(horizon, gens)
}
