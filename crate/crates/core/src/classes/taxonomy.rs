use crate::class::FiniteClass;
use crate::classes::product::make_product_class;
use crate::classes::rate::{normalize_rate, rate_to_set, RateTable};
use crate::classes::shifted::make_shifted_subset_class;
use crate::error::{Error, Result};

/// Class whose e2e VC dimension at `T` lies in `[r(T), r(T) + r(1)]`.
///
/// Builds `F(N)` for the normalized rate and takes `r(1)` relocated copies.
/// With `r(1) = 1` the single part is returned as is; otherwise every copy
/// gets horizon `H - 2`, which makes the product horizon exactly `H`.
pub fn make_taxonomy_class(
    r: &RateTable,
    s_max: u64,
    horizon: usize,
    cap: u128,
) -> Result<FiniteClass> {
    let copies = r.values()[0] as usize;
    let n = rate_to_set(&normalize_rate(r))?;
    if copies == 1 {
        return make_shifted_subset_class(&n, s_max, horizon, cap);
    }
    let part_h = horizon.checked_sub(2).ok_or(Error::HorizonTooSmall {
        horizon,
        needed: 2,
    })?;
    let part = make_shifted_subset_class(&n, s_max, part_h, cap).map_err(|e| match e {
        Error::HorizonTooSmall { needed, .. } => Error::HorizonTooSmall {
            horizon,
            needed: needed + 2,
        },
        e => e,
    })?;
    let parts = vec![part; copies];
    make_product_class(&parts, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::DEFAULT_CAP;
    use crate::classes::rate::IntervalSet;

    #[test]
    fn single_copy_is_plain_shifted_class() {
        let r = RateTable::new(vec![1, 2, 2, 3]).unwrap();
        let c = make_taxonomy_class(&r, 4, 12, DEFAULT_CAP).unwrap();
        let n = IntervalSet::new(vec![1, 2, 4]).unwrap();
        assert_eq!(c, make_shifted_subset_class(&n, 4, 12, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn two_copies() {
        let r = RateTable::new(vec![2, 2, 2, 4]).unwrap();
        let c = make_taxonomy_class(&r, 4, 12, DEFAULT_CAP).unwrap();
        // N = {1, 4}: 5 shifts × 4 subsets per copy.
        assert_eq!(c.len(), 400);
        assert_eq!(c.horizon(), 12);
        assert!(matches!(
            make_taxonomy_class(&r, 4, 9, DEFAULT_CAP),
            Err(Error::HorizonTooSmall { needed: 10, .. })
        ));
    }
}
