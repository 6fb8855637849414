//! Shattering searches: VC, dual VC, Natarajan and the growth function.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;

use crate::class::FiniteClass;
use crate::dims::{restrict_base, Domain, PatternSet};
use crate::error::{Error, Result};

/// Binary rows packed into words, one bit per column.
struct BitRows {
    rows: Vec<Vec<u64>>,
    ncols: usize,
}

impl BitRows {
    fn from_patterns(p: &PatternSet) -> Self {
        let ncols = p.width();
        let words = ncols.div_ceil(64).max(1);
        let rows = p
            .patterns()
            .iter()
            .map(|pat| {
                let mut r = vec![0u64; words];
                for (c, &l) in pat.iter().enumerate() {
                    if l & 1 == 1 {
                        r[c / 64] |= 1 << (c % 64);
                    }
                }
                r
            })
            .collect();
        Self { rows, ncols }
    }

    fn bit(row: &[u64], c: usize) -> usize {
        (row[c / 64] >> (c % 64)) as usize & 1
    }

    fn shatters(&self, cols: &[usize]) -> bool {
        let k = cols.len();
        if k >= 40 || self.rows.len() < 1usize << k {
            return false;
        }
        let need = 1usize << k;
        let mut seen = vec![0u64; need.div_ceil(64)];
        let mut count = 0;
        for r in &self.rows {
            let idx = cols.iter().fold(0usize, |acc, &c| (acc << 1) | Self::bit(r, c));
            let (w, b) = (idx / 64, idx % 64);
            if seen[w] >> b & 1 == 0 {
                seen[w] |= 1 << b;
                count += 1;
                if count == need {
                    return true;
                }
            }
        }
        false
    }

    /// Size of the largest shattered column set.
    ///
    /// Shattered sets are closed under subsets, so level `k + 1` candidates
    /// are extensions of level-`k` sets by a larger column whose every
    /// `k`-subset is itself shattered. Sets are visited in lexicographic order
    /// within each level, and the search stops at the first empty level.
    fn max_shattered(&self) -> usize {
        if self.rows.is_empty() {
            return 0;
        }
        let mut level: Vec<Vec<usize>> = vec![vec![]];
        let mut k = 0;
        loop {
            let known: HashSet<&[usize]> = level.iter().map(Vec::as_slice).collect();
            let next: Vec<Vec<usize>> = level
                .par_iter()
                .flat_map_iter(|s| {
                    let start = s.last().map_or(0, |&m| m + 1);
                    let known = &known;
                    (start..self.ncols).filter_map(move |j| {
                        let mut cand = s.clone();
                        cand.push(j);
                        let closed = (0..s.len()).all(|i| {
                            let mut sub = cand.clone();
                            sub.remove(i);
                            known.contains(sub.as_slice())
                        });
                        (closed && self.shatters(&cand)).then_some(cand)
                    })
                })
                .collect();
            if next.is_empty() {
                return k;
            }
            level = next;
            k += 1;
        }
    }
}

/// Largest coordinate set carrying all `2^k` sub-patterns.
///
/// Non-binary patterns are read through their last symbol.
pub fn vc_dimension(p: &PatternSet) -> usize {
    if p.is_binary() {
        BitRows::from_patterns(p).max_shattered()
    } else {
        BitRows::from_patterns(&p.last_bit_projection()).max_shattered()
    }
}

/// VC dimension of the transpose: domain points become patterns over the
/// distinct columns (labelings) of `p`.
pub fn dual_vc_of_patterns(p: &PatternSet) -> usize {
    let p = if p.is_binary() { p.clone() } else { p.last_bit_projection() };
    // Duplicated labelings can never sit together in a shattered set, and
    // the pattern set is already deduplicated.
    let cols = p.patterns();
    let ncols = cols.len();
    let words = ncols.div_ceil(64).max(1);
    let mut rows: Vec<Vec<u64>> = (0..p.width())
        .map(|x| {
            let mut r = vec![0u64; words];
            for (g, pat) in cols.iter().enumerate() {
                if pat[x] == 1 {
                    r[g / 64] |= 1 << (g % 64);
                }
            }
            r
        })
        .collect();
    rows.sort_unstable();
    rows.dedup();
    BitRows { rows, ncols }.max_shattered()
}

/// Dual VC dimension of the base class on `D`: rows are prompts, columns are
/// behaviourally distinct generators.
pub fn dual_vc_dimension(class: &FiniteClass, d: &Domain) -> Result<usize> {
    Ok(dual_vc_of_patterns(&restrict_base(class, d)?))
}

/// Cell refinement for Natarajan shattering: every cell is the set of patterns
/// matching one choice of sides on the coordinates fixed so far.
fn natarajan_extend(p: &[Vec<u64>], cells: &[Vec<usize>], cols: &[usize]) -> bool {
    let Some((&c, rest)) = cols.split_first() else {
        return true;
    };
    // A usable pair must have both labels present in every cell.
    let mut common: Option<BTreeSet<u64>> = None;
    for cell in cells {
        let labels: BTreeSet<u64> = cell.iter().map(|&i| p[i][c]).collect();
        common = Some(match common {
            None => labels,
            Some(prev) => prev.intersection(&labels).copied().collect(),
        });
        if common.as_ref().is_some_and(|s| s.len() < 2) {
            return false;
        }
    }
    let labels: Vec<u64> = common.unwrap_or_default().into_iter().collect();
    for (ai, &a) in labels.iter().enumerate() {
        for &b in &labels[ai + 1..] {
            let next: Vec<Vec<usize>> = cells
                .iter()
                .flat_map(|cell| {
                    let lo = cell.iter().copied().filter(|&i| p[i][c] == a).collect();
                    let hi = cell.iter().copied().filter(|&i| p[i][c] == b).collect();
                    [lo, hi]
                })
                .collect();
            if natarajan_extend(p, &next, rest) {
                return true;
            }
        }
    }
    false
}

fn natarajan_shatters(p: &PatternSet, cols: &[usize]) -> bool {
    if p.len() < 1usize << cols.len().min(63) {
        return false;
    }
    let all: Vec<usize> = (0..p.len()).collect();
    natarajan_extend(p.patterns(), &[all], cols)
}

/// Largest `k` admitting coordinates and per-coordinate label pairs whose
/// `2^k` mixtures all occur. Same level-wise search as [`vc_dimension`].
pub fn natarajan_dimension(p: &PatternSet) -> usize {
    if p.is_empty() {
        return 0;
    }
    let mut level: Vec<Vec<usize>> = vec![vec![]];
    let mut k = 0;
    loop {
        let known: HashSet<&[usize]> = level.iter().map(Vec::as_slice).collect();
        let next: Vec<Vec<usize>> = level
            .par_iter()
            .flat_map_iter(|s| {
                let start = s.last().map_or(0, |&m| m + 1);
                let known = &known;
                (start..p.width()).filter_map(move |j| {
                    let mut cand = s.clone();
                    cand.push(j);
                    let closed = (0..s.len()).all(|i| {
                        let mut sub = cand.clone();
                        sub.remove(i);
                        known.contains(sub.as_slice())
                    });
                    (closed && natarajan_shatters(p, &cand)).then_some(cand)
                })
            })
            .collect();
        if next.is_empty() {
            return k;
        }
        level = next;
        k += 1;
    }
}

/// `Γ(m)`: the most distinct sub-patterns on any `m` coordinates.
pub fn growth_function(p: &PatternSet, m: usize) -> Result<usize> {
    if m > p.width() {
        return Err(Error::InvalidArgument(format!(
            "m = {m} exceeds domain size {}",
            p.width()
        )));
    }
    if p.is_empty() {
        return Ok(0);
    }
    let combos: Vec<Vec<usize>> = (0..p.width()).combinations(m).collect();
    Ok(combos
        .par_iter()
        .map(|cols| {
            let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
            for pat in p.patterns() {
                seen.insert(cols.iter().map(|&c| pat[c]).collect(), ());
            }
            seen.len()
        })
        .max()
        .unwrap_or(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bs, Bit};
    use crate::class::DEFAULT_CAP;
    use crate::classes::make_full_class;
    use crate::dims::{restrict_cot, restrict_e2e};
    use crate::generator::Generator;

    fn binary(rows: &[&str]) -> PatternSet {
        let rows: Vec<Vec<Bit>> = rows.iter().map(|r| bs(r).iter().collect()).collect();
        PatternSet::from_bits(&rows).unwrap()
    }

    fn all_patterns(m: usize) -> PatternSet {
        let rows: Vec<Vec<Bit>> = crate::bits::BitString::all_of_length(m)
            .map(|s| s.iter().collect())
            .collect();
        PatternSet::from_bits(&rows).unwrap()
    }

    /// Straightforward oracle: try every subset.
    fn vc_oracle(p: &PatternSet) -> usize {
        let w = p.width();
        (0..=w)
            .rev()
            .find(|&k| {
                (0..w).combinations(k).any(|cols| {
                    let seen: HashSet<Vec<u64>> = p
                        .patterns()
                        .iter()
                        .map(|pat| cols.iter().map(|&c| pat[c]).collect())
                        .collect();
                    seen.len() == 1 << k
                })
            })
            .unwrap_or(0)
    }

    #[test]
    fn vc_examples() {
        assert_eq!(vc_dimension(&binary(&["0000"])), 0);
        assert_eq!(vc_dimension(&all_patterns(5)), 5);
        assert_eq!(vc_dimension(&binary(&["01", "10"])), 1);
        assert_eq!(vc_dimension(&binary(&["00", "01", "10"])), 1);
    }

    #[test]
    fn natarajan_examples() {
        assert_eq!(natarajan_dimension(&binary(&["0101"])), 0);
        let c = FiniteClass::new(
            4,
            vec![Generator::constant(Bit::Zero, 4), Generator::constant(Bit::One, 4)],
        )
        .unwrap();
        let d = Domain::new(vec![bs("")]).unwrap();
        assert_eq!(natarajan_dimension(&restrict_cot(&c, &d, 2).unwrap()), 1);
        // Three labels on one point, no product structure on two points.
        let p = PatternSet::new(2, 2, vec![vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(natarajan_dimension(&p), 1);
        let p = PatternSet::new(2, 2, vec![vec![0, 3], vec![0, 2], vec![1, 3], vec![1, 2]]).unwrap();
        assert_eq!(natarajan_dimension(&p), 2);
    }

    #[test]
    fn dual_examples() {
        let c = FiniteClass::new(4, vec![Generator::constant(Bit::One, 4)]).unwrap();
        assert_eq!(dual_vc_dimension(&c, &Domain::chain(3)).unwrap(), 0);
        // Full class on all strings up to length 2: base patterns are the
        // prefix-reveal tables.
        let f = make_full_class(4, DEFAULT_CAP).unwrap();
        let d = Domain::all_up_to(2);
        let vc = vc_dimension(&restrict_base(&f, &d).unwrap());
        let dual = dual_vc_dimension(&f, &d).unwrap();
        assert!(dual <= 1 << (vc + 1));
    }

    #[test]
    fn dual_of_all_labelings() {
        for m in 1..=8usize {
            let expect = usize::BITS as usize - 1 - m.leading_zeros() as usize;
            assert_eq!(dual_vc_of_patterns(&all_patterns(m)), expect, "m = {m}");
        }
    }

    #[test]
    fn growth_examples() {
        let p = all_patterns(4);
        assert_eq!(growth_function(&p, 0).unwrap(), 1);
        assert_eq!(growth_function(&p, 3).unwrap(), 8);
        assert!(growth_function(&p, 5).is_err());
        let c = make_full_class(8, DEFAULT_CAP).unwrap();
        let e = restrict_e2e(&c, &Domain::chain(4), 2).unwrap();
        assert!(growth_function(&e, 2).unwrap() <= 4);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_binary() -> impl Strategy<Value = PatternSet> {
            (1usize..7).prop_flat_map(|w| {
                proptest::collection::vec(proptest::collection::vec(0u64..2, w), 1..20)
                    .prop_map(move |rows| PatternSet::new(w, 1, rows).unwrap())
            })
        }

        fn arb_multi() -> impl Strategy<Value = PatternSet> {
            (1usize..5).prop_flat_map(|w| {
                proptest::collection::vec(proptest::collection::vec(0u64..3, w), 1..20)
                    .prop_map(move |rows| PatternSet::new(w, 2, rows).unwrap())
            })
        }

        proptest! {
            #[test]
            fn vc_matches_oracle(p in arb_binary()) {
                prop_assert_eq!(vc_dimension(&p), vc_oracle(&p));
            }

            #[test]
            fn natarajan_equals_vc_on_binary(p in arb_binary()) {
                prop_assert_eq!(natarajan_dimension(&p), vc_dimension(&p));
            }

            #[test]
            fn vc_is_monotone(p in arb_binary(), q in arb_binary()) {
                if p.width() == q.width() {
                    let u = p.union(&q).unwrap();
                    prop_assert!(vc_dimension(&u) >= vc_dimension(&p));
                }
                let coords: Vec<usize> = (0..p.width()).step_by(2).collect();
                prop_assert!(vc_dimension(&p.project(&coords)) <= vc_dimension(&p));
            }

            #[test]
            fn sauer_shelah_perles(p in arb_binary(), m in 0usize..7) {
                if m <= p.width() {
                    let g = growth_function(&p, m).unwrap() as f64;
                    let vc = vc_dimension(&p) as i32;
                    let bound = (2.0 * std::f64::consts::E * m as f64).powi(2 * vc);
                    prop_assert!(g <= bound.max(1.0));
                }
            }

            #[test]
            fn natarajan_growth_bound(p in arb_multi(), m in 0usize..5) {
                if m <= p.width() {
                    let g = growth_function(&p, m).unwrap() as f64;
                    let labels = 1 << p.label_bits();
                    let nat = natarajan_dimension(&p) as i32;
                    let bound = (std::f64::consts::E * m as f64 * labels as f64).powi(2 * nat);
                    prop_assert!(g <= bound.max(1.0));
                }
            }
        }
    }
}
