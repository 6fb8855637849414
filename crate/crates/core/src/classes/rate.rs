//! Growth-rate tables and their correspondence with sets of positive integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `r(1), …, r(T_max)`: positive, non-decreasing and subadditive on the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct RateTable {
    values: Vec<u64>,
}

impl RateTable {
    /// Validates eagerly.
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::RateInvalid("empty table".into()));
        }
        if let Some(t) = values.iter().position(|&v| v == 0) {
            return Err(Error::RateInvalid(format!("r({}) = 0 is not positive", t + 1)));
        }
        if let Some(t) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::RateInvalid(format!(
                "not monotone: r({}) = {} > r({}) = {}",
                t + 1,
                values[t],
                t + 2,
                values[t + 1]
            )));
        }
        // 1-based: r(a+b) <= r(a) + r(b). Monotonicity lets us stop early per `a`
        // once r(a) + r(b) already exceeds the table maximum.
        let n = values.len();
        let top = values[n - 1];
        for a in 1..=n / 2 {
            let ra = values[a - 1];
            for b in a..=n - a {
                let rb = values[b - 1];
                if ra + rb >= top {
                    break;
                }
                if values[a + b - 1] > ra + rb {
                    return Err(Error::RateInvalid(format!(
                        "not subadditive: r({}) = {} > r({a}) + r({b}) = {}",
                        a + b,
                        values[a + b - 1],
                        ra + rb
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    /// Tabulates `f(1), …, f(t_max)`.
    pub fn from_fn(t_max: usize, f: impl Fn(u64) -> u64) -> Result<Self> {
        Self::new((1..=t_max as u64).map(f).collect())
    }

    pub fn t_max(&self) -> usize {
        self.values.len()
    }

    /// `r(t)` for `1 ≤ t ≤ T_max`.
    pub fn at(&self, t: usize) -> Option<u64> {
        t.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

impl TryFrom<Vec<u64>> for RateTable {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RateTable> for Vec<u64> {
    fn from(r: RateTable) -> Self {
        r.values
    }
}

/// A finite, strictly increasing set of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct IntervalSet {
    members: Vec<u64>,
}

impl IntervalSet {
    pub fn new(members: Vec<u64>) -> Result<Self> {
        if members.first() == Some(&0) {
            return Err(Error::InvalidArgument("set members must be positive".into()));
        }
        if members.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "set members must be strictly increasing".into(),
            ));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.members.last().copied()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

impl TryFrom<Vec<u64>> for IntervalSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IntervalSet> for Vec<u64> {
    fn from(s: IntervalSet) -> Self {
        s.members
    }
}

/// `r_N(T) = max_u |N ∩ [u+1, u+T]|`.
///
/// Some optimal window starts at a member of `N`, so a two-pointer sweep over
/// the sorted members suffices.
pub fn interval_density(n: &IntervalSet, t: u64) -> u64 {
    if t == 0 {
        return 0;
    }
    let m = n.members();
    let mut best = 0;
    let mut hi = 0;
    for lo in 0..m.len() {
        if hi < lo {
            hi = lo;
        }
        while hi < m.len() && m[hi] - m[lo] < t {
            hi += 1;
        }
        best = best.max(hi - lo);
    }
    best as u64
}

/// `N = { t_k : k ≤ r(T_max) }` with `t_k = min{T : r(T) ≥ k}`.
pub fn rate_to_set(r: &RateTable) -> Result<IntervalSet> {
    let v = r.values();
    if v[0] != 1 {
        return Err(Error::RateNotNormalized(v[0]));
    }
    let mut members = vec![1];
    for t in 1..v.len() {
        match v[t] - v[t - 1] {
            0 => {}
            1 => members.push(t as u64 + 1),
            _ => {
                return Err(Error::RateInvalid(format!(
                    "r jumps from {} to {} at T = {}",
                    v[t - 1],
                    v[t],
                    t + 1
                )))
            }
        }
    }
    IntervalSet::new(members)
}

/// `r̃(T) = ⌈r(T) / r(1)⌉`.
pub fn normalize_rate(r: &RateTable) -> RateTable {
    let c = r.values()[0];
    let values = r.values().iter().map(|&v| v.div_ceil(c)).collect();
    RateTable::new(values).expect("normalization preserves validity")
}
