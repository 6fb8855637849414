//! A rate that eventually beats every row of a given table of sublinear
//! functions: `r(T_d) = T_d / 2^d` at rapidly spaced breakpoints `T_d`.

use num_rational::Ratio;

use crate::classes::rate::RateTable;
use crate::error::{Error, Result};

/// Breakpoints `T_0 = 1`, `T_d = max(4 T_{d-1}, N_d)` where `N_d` is the first
/// `T` with `M(d, T) · 2^{d+3} < T`.
pub fn diagonal_breakpoints(
    m: impl Fn(usize, u64) -> f64,
    d_max: usize,
    search_cap: u64,
) -> Result<Vec<u64>> {
    let mut ts = vec![1u64];
    for d in 1..=d_max {
        if d + 3 >= 64 {
            return Err(Error::SearchCapExceeded(format!("level {d} is too deep")));
        }
        let scale = (1u64 << (d + 3)) as f64;
        let n_d = (1..=search_cap)
            .find(|&t| m(d, t) * scale < t as f64)
            .ok_or_else(|| {
                Error::SearchCapExceeded(format!("no N_{d} up to T = {search_cap}"))
            })?;
        let prev = ts[d - 1];
        ts.push(prev.saturating_mul(4).max(n_d));
    }
    Ok(ts)
}

/// `⌈r̃⌉` tabulated to `T_{d_max}`, where `r̃` interpolates linearly through
/// `(T_d, T_d / 2^d)` in exact rational arithmetic.
pub fn diagonal_rate(
    m: impl Fn(usize, u64) -> f64,
    d_max: usize,
    search_cap: u64,
) -> Result<RateTable> {
    let ts = diagonal_breakpoints(m, d_max, search_cap)?;
    let t_end = *ts.last().unwrap();
    if t_end > search_cap {
        return Err(Error::SearchCapExceeded(format!(
            "table length {t_end} exceeds {search_cap}"
        )));
    }
    let point = |d: usize| Ratio::new(ts[d] as i128, 1i128 << d);
    let mut values = Vec::with_capacity(t_end as usize);
    values.push(1);
    for d in 1..ts.len() {
        let (x0, x1) = (ts[d - 1] as i128, ts[d] as i128);
        let (y0, y1) = (point(d - 1), point(d));
        let slope = (y1 - y0) / Ratio::from_integer(x1 - x0);
        for t in (x0 + 1)..=x1 {
            let r = y0 + slope * Ratio::from_integer(t - x0);
            values.push(r.ceil().to_integer() as u64);
        }
    }
    RateTable::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(_d: usize, t: u64) -> f64 {
        (t as f64).sqrt()
    }

    #[test]
    fn sqrt_first_breakpoint() {
        let ts = diagonal_breakpoints(sqrt, 1, 10_000).unwrap();
        assert_eq!(ts, vec![1, 257]);
        let r = diagonal_rate(sqrt, 1, 10_000).unwrap();
        assert_eq!(r.t_max(), 257);
        assert_eq!(r.at(1), Some(1));
        // 257 / 2 rounded up.
        assert_eq!(r.at(257), Some(129));
    }

    #[test]
    fn later_breakpoints_use_the_max_rule() {
        let ts = diagonal_breakpoints(sqrt, 3, 100_000).unwrap();
        assert_eq!(ts, vec![1, 257, 1028, 4112]);
        let r = diagonal_rate(sqrt, 3, 100_000).unwrap();
        assert_eq!(r.t_max(), 4112);
        assert_eq!(r.at(1028), Some(257));
        assert_eq!(r.at(4112), Some(514));
    }

    #[test]
    fn cap_is_reported() {
        let linear = |_d: usize, t: u64| t as f64;
        assert!(matches!(
            diagonal_rate(linear, 1, 1000),
            Err(Error::SearchCapExceeded(_))
        ));
        assert!(matches!(
            diagonal_rate(sqrt, 2, 500),
            Err(Error::SearchCapExceeded(_))
        ));
    }

    #[test]
    fn rows_can_differ_per_level() {
        let m = |d: usize, t: u64| (t as f64).powf(1.0 - 1.0 / (d as f64 + 1.0));
        let r = diagonal_rate(m, 2, 1 << 22).unwrap();
        assert_eq!(r.at(1), Some(1));
    }
}
