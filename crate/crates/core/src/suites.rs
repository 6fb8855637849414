//! Named property suites run by the `verify` command.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::{Bit, BitString};
use crate::class::{FiniteClass, DEFAULT_CAP};
use crate::classes::parity::q_prompt;
use crate::classes::product::part_prefix;
use crate::classes::{
    enumerate_linear_class, interval_density, make_atdim_example_class, make_full_class,
    make_parity_class, make_product_class, make_shifted_subset_class, rate_to_set, IntervalSet,
    RateTable,
};
use crate::dims::{
    atdim_realized, growth_function, leaf_count_bound_check, leveled_subtree_depth,
    littlestone_dimension, random_leveled_tree, restrict_base, restrict_cot, restrict_e2e,
    vc_dimension, Domain,
};
use crate::error::{Error, Result};
use crate::harness::{parity_lower_bound_experiment, trial_rng, Learner, ParityExperiment};
use crate::learners::{
    cot_compress, cot_reconstruct, stable_compress_cot, stable_reconstruct_cot, CompressConfig,
    CotSample,
};
use crate::tree::realized_trace_tree;

pub const SUITES: [&str; 4] = ["lemmas", "compression", "parity", "sauer"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<Check>> {
    match name {
        "lemmas" => lemmas(seed),
        "compression" => compression(seed),
        "parity" => parity(seed),
        "sauer" => sauer(seed),
        other => Err(Error::Parse(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// The class `F(N = {1,3,4})` used by the compression experiments.
pub fn compression_class() -> Result<FiniteClass> {
    make_shifted_subset_class(&IntervalSet::new(vec![1, 3, 4])?, 8, 24, DEFAULT_CAP)
}

/// A random realizable sample for `class`: uniform target, `m ≤ m_max`,
/// `T ≤ t_max`, prompts mixing zero chains, prefixes of the target's own
/// traces and uniform strings of length at most `max_len`.
pub fn random_cot_sample<R: Rng + ?Sized>(
    class: &FiniteClass,
    rng: &mut R,
    m_max: usize,
    t_max: usize,
    max_len: usize,
) -> Result<(usize, CotSample)> {
    let target_idx = rng.gen_range(0..class.len());
    let target = &class.generators()[target_idx];
    let t = rng.gen_range(1..=t_max);
    let m = rng.gen_range(0..=m_max);
    let mut prompts = Vec::with_capacity(m);
    for _ in 0..m {
        let len = rng.gen_range(0..=max_len);
        let x = match rng.gen_range(0..4) {
            0 | 1 => BitString::zeros(len),
            2 => {
                let seed = BitString::zeros(rng.gen_range(0..=max_len / 2));
                let tr = crate::generator::cot_trace(target, &seed, max_len - seed.len())?;
                seed.concat(&tr).prefix(len.max(seed.len()))
            }
            _ => (0..len).map(|_| Bit::from(rng.gen_bool(0.5))).collect(),
        };
        prompts.push(x);
    }
    Ok((target_idx, CotSample::from_target(target, &prompts, t)?))
}

/// `(consistent round trips, kernel sizes)` of the boosting scheme.
pub fn boosting_round_trips(seed: u64, n: usize) -> Result<Vec<(bool, usize)>> {
    let class = compression_class()?;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let (_, s) = random_cot_sample(&class, &mut rng, 20, 4, 10)?;
            let c = cot_compress(&class, &s, &CompressConfig::new(12, rng.gen()))?;
            let h = cot_reconstruct(&class, &c)?;
            Ok((s.is_consistent(&h)?, c.kernel.len()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableOutcome {
    pub d: usize,
    pub kernel: usize,
    pub consistent: bool,
    pub stable: bool,
}

/// Round trips of the stable linear scheme on random realizable samples.
pub fn linear_round_trips(seed: u64, n: usize) -> Result<Vec<StableOutcome>> {
    let classes: Vec<FiniteClass> = (1..=3)
        .map(|d| enumerate_linear_class(d, 2, 32, DEFAULT_CAP))
        .collect::<Result<_>>()?;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let d = 1 + i % 3;
            let class = &classes[d - 1];
            let target = class.generators().choose(&mut rng).expect("nonempty");
            let t = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=15);
            let prompts: Vec<BitString> = (0..m)
                .map(|_| {
                    let len = rng.gen_range(0..=6);
                    (0..len).map(|_| Bit::from(rng.gen_bool(0.5))).collect()
                })
                .collect();
            let s = CotSample::from_target(target, &prompts, t)?;
            let (k, idx) = stable_compress_cot(&s, d)?;
            let h = stable_reconstruct_cot(&k, d, 32)?;
            let consistent = s.is_consistent(&h)?;
            let mut stable = true;
            for j in (0..s.len()).filter(|j| !idx.contains(j)) {
                if stable_compress_cot(&s.without(j), d)?.0 != k {
                    stable = false;
                    break;
                }
            }
            Ok(StableOutcome {
                d,
                kernel: k.len(),
                consistent,
                stable,
            })
        })
        .collect()
}

/// A random class of 2..=24 members of the full class with horizon 8,
/// and a random domain of 6 distinct prompts of length at most 3.
pub fn random_small_class<R: Rng + ?Sized>(full: &FiniteClass, rng: &mut R) -> Result<(FiniteClass, Domain)> {
    let size = rng.gen_range(2..=24);
    let idx: Vec<usize> = rand::seq::index::sample(rng, full.len(), size).into_vec();
    let class = full.select(&idx)?;
    let pool: Vec<BitString> = Domain::all_up_to(3).prompts().to_vec();
    let prompts: Vec<BitString> = pool.choose_multiple(rng, 6).cloned().collect();
    Ok((class, Domain::new(prompts)?))
}

/// Growth-function inequalities on one random class; `None` when they hold,
/// otherwise a description of the violation.
pub fn growth_violation(class: &FiniteClass, d: &Domain, t: usize) -> Result<Option<String>> {
    let cot = restrict_cot(class, d, t)?;
    let first = cot.first_bit_projection();
    let base = restrict_base(class, d)?;
    let vc = vc_dimension(&base);
    for m in 1..=d.len() {
        let g_first = growth_function(&first, m)?;
        let g_cot = growth_function(&cot, m)?;
        if g_first > g_cot {
            return Ok(Some(format!("Γ_first({m}) = {g_first} > Γ_cot({m}) = {g_cot}")));
        }
        let g_base = growth_function(&base, m)? as f64;
        let bound = (2.0 * std::f64::consts::E * m as f64).powi(2 * vc as i32);
        if g_base > bound {
            return Ok(Some(format!("Γ({m}) = {g_base} > (2em)^(2·{vc})")));
        }
    }
    Ok(None)
}

fn lemmas(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let n = IntervalSet::new(vec![1, 3, 4])?;
    let fnc = make_shifted_subset_class(&n, 16, 32, DEFAULT_CAP)?;
    let vcs: Vec<usize> = (1..=6)
        .map(|t| Ok(vc_dimension(&restrict_e2e(&fnc, &Domain::chain(8), t)?)))
        .collect::<Result<_>>()?;
    let want: Vec<usize> = (1..=6).map(|t| interval_density(&n, t) as usize).collect();
    out.push(Check::new("taxonomy identity", vcs == want, format!("vc {vcs:?}, density {want:?}")));

    let full = make_full_class(16, DEFAULT_CAP)?;
    let vcs: Vec<usize> = (1..=5)
        .map(|t| Ok(vc_dimension(&restrict_e2e(&full, &Domain::chain(10), t)?)))
        .collect::<Result<_>>()?;
    out.push(Check::new("full class linearity", vcs == vec![1, 2, 3, 4, 5], format!("vc {vcs:?}")));

    let r = RateTable::from_fn(64, |t| (t as f64).sqrt().ceil() as u64)?;
    let set = rate_to_set(&r)?;
    let ok = (1..=64).all(|t| interval_density(&set, t as u64) == r.at(t).unwrap());
    out.push(Check::new("rate round trip", ok, format!("N = {:?}", set.members())));

    let part = make_shifted_subset_class(&IntervalSet::new(vec![1, 3])?, 6, 16, DEFAULT_CAP)?;
    let prod = make_product_class(&[part.clone(), part.clone()], DEFAULT_CAP)?;
    let chain = Domain::chain(6);
    let relocated: Vec<BitString> = (1..=2)
        .flat_map(|i| chain.prompts().iter().map(move |x| part_prefix(i).concat(x)))
        .collect();
    let pd = Domain::new(relocated)?;
    let base_part = vc_dimension(&restrict_base(&part, &chain)?);
    let base_prod = vc_dimension(&restrict_base(&prod, &pd)?);
    let e2e_part = vc_dimension(&restrict_e2e(&part, &chain, 2)?);
    let e2e_prod = vc_dimension(&restrict_e2e(&prod, &pd, 2)?);
    out.push(Check::new(
        "product additivity",
        base_prod == 2 * base_part && e2e_prod == 2 * e2e_part,
        format!("base {base_prod} = 2·{base_part}, e2e(T=2) {e2e_prod} = 2·{e2e_part}"),
    ));

    let depth = 4;
    let ex = make_atdim_example_class(depth, 32, DEFAULT_CAP)?;
    let labels = Domain::chain((1 << depth) - 1);
    let vc = vc_dimension(&restrict_base(&ex, &labels)?);
    let at = atdim_realized(&ex, &labels, 6)?;
    let ld = littlestone_dimension(&ex, &labels, depth + 2)?.value;
    let mut branches_ok = true;
    for t in 2..=6 {
        for x in labels.prompts() {
            if realized_trace_tree(&ex, x, t)?.branch_count() > t * t {
                branches_ok = false;
            }
        }
    }
    out.push(Check::new(
        "atdim example",
        vc == 1 && at == 1 && ld >= depth && branches_ok,
        format!("vc {vc}, atdim {at}, littlestone {ld}, branches ≤ T² {branches_ok}"),
    ));

    let full8 = make_full_class(8, DEFAULT_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violation = None;
    for _ in 0..50 {
        let (class, d) = random_small_class(&full8, &mut rng)?;
        for t in 1..=3 {
            if let Some(v) = growth_violation(&class, &d, t)? {
                violation.get_or_insert(v);
            }
        }
    }
    out.push(Check::new(
        "growth inequalities",
        violation.is_none(),
        violation.unwrap_or_else(|| "50 classes, m ≤ 6, T ≤ 3".into()),
    ));
    Ok(out)
}

fn compression(seed: u64) -> Result<Vec<Check>> {
    let boost = boosting_round_trips(seed, 500)?;
    let bad = boost.iter().filter(|(ok, _)| !ok).count();
    let max_kernel = boost.iter().map(|(_, k)| *k).max().unwrap_or(0);
    let lin = linear_round_trips(seed, 500)?;
    let too_big = lin.iter().filter(|o| o.kernel > o.d + 1).count();
    let unstable = lin.iter().filter(|o| !o.stable).count();
    let inconsistent = lin.iter().filter(|o| !o.consistent).count();
    Ok(vec![
        Check::new(
            "boosting round trips",
            bad == 0,
            format!("500 samples, {bad} inconsistent, largest kernel {max_kernel}"),
        ),
        Check::new("linear kernel size", too_big == 0, format!("{too_big} of 500 exceed d+1")),
        Check::new("linear stability", unstable == 0, format!("{unstable} of 500 unstable")),
        Check::new("linear round trips", inconsistent == 0, format!("{inconsistent} of 500 inconsistent")),
    ])
}

fn parity(seed: u64) -> Result<Vec<Check>> {
    let class = make_parity_class(8, 16, DEFAULT_CAP)?;
    let d = Domain::new((1..=8).map(q_prompt).collect())?;
    let even: Vec<usize> = [2, 4]
        .iter()
        .map(|&t| Ok(vc_dimension(&restrict_e2e(&class, &d, t)?)))
        .collect::<Result<_>>()?;
    let mut e = ParityExperiment::new(8, 4, 200, seed);
    e.learner = Learner::CotCompress { s: 12 };
    let st = parity_lower_bound_experiment(&e)?;
    Ok(vec![
        Check::new("even T collapse", even == vec![0, 0], format!("vc at T=2,4: {even:?}")),
        Check::new(
            "odd T lower bound",
            st.frequency >= 0.4,
            format!("P[error ≥ 1/4] = {:.3} over {} trials", st.frequency, st.trials),
        ),
        Check::new(
            "bad-count symmetry",
            st.sign_p_value > 0.001,
            format!("{} above, {} below, sign-test p = {:.3}", st.above, st.below, st.sign_p_value),
        ),
    ])
}

fn sauer(seed: u64) -> Result<Vec<Check>> {
    let results: Vec<(bool, usize)> = (0..1000)
        .into_par_iter()
        .map(|i| {
            let tree = random_leveled_tree(10, &mut trial_rng(seed, i))?;
            let d = leveled_subtree_depth(&tree)?;
            Ok((leaf_count_bound_check(&tree, d), d))
        })
        .collect::<Result<_>>()?;
    let bad = results.iter().filter(|(ok, _)| !ok).count();
    let max_d = results.iter().map(|(_, d)| *d).max().unwrap_or(0);
    Ok(vec![Check::new(
        "leaf count bound",
        bad == 0,
        format!("1000 trees of depth 10, {bad} violations, max depth {max_d}"),
    )])
}
