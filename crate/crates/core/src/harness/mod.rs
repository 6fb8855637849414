//! PAC simulation: exact-support distributions, seeded trials, sample
//! complexity search and T sweeps.

pub mod parity;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_integer::Integer;
use num_rational::Rational64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::bits::{Bit, BitString};
use crate::class::FiniteClass;
use crate::error::{Error, Result};
use crate::generator::{cot_trace, e2e_output, NextToken};
use crate::learners::{
    cot_compress, cot_reconstruct, erm, erm_e2e, inflate, stable_compress_cot,
    stable_reconstruct_cot, CompressConfig, CotSample,
};

pub use parity::{parity_lower_bound_experiment, ParityExperiment, ParityStats};

/// Default upper limit of the sample-size search.
pub const DEFAULT_M_CAP: usize = 4096;

/// The seed of trial `index`: the `index`-th output of SplitMix64 started at
/// `master`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut sm = SplitMix64::seed_from_u64(master);
    for _ in 0..index {
        sm.next_u64();
    }
    sm.next_u64()
}

pub fn trial_rng(master: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

/// A finite distribution over prompts with exact probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    support: Vec<BitString>,
    probs: Vec<Rational64>,
    /// Cumulative numerators over the common denominator.
    cumulative: Vec<i64>,
    denom: i64,
}

impl Distribution {
    pub fn new(support: Vec<BitString>, probs: Vec<Rational64>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::InvalidArgument(
                "distribution needs matching nonempty support and probabilities".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(x) = support.iter().find(|x| !seen.insert(*x)) {
            return Err(Error::InvalidArgument(format!("duplicate support point {x:?}")));
        }
        if probs.iter().any(|p| *p <= Rational64::from_integer(0)) {
            return Err(Error::InvalidArgument("probabilities must be positive".into()));
        }
        if probs.iter().sum::<Rational64>() != Rational64::from_integer(1) {
            return Err(Error::InvalidArgument("probabilities must sum to 1".into()));
        }
        let denom = probs.iter().fold(1i64, |l, p| l.lcm(p.denom()));
        let mut acc = 0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p.numer() * (denom / p.denom());
                acc
            })
            .collect();
        Ok(Self {
            support,
            probs,
            cumulative,
            denom,
        })
    }

    pub fn uniform(support: Vec<BitString>) -> Result<Self> {
        let n = support.len().max(1) as i64;
        let probs = vec![Rational64::new(1, n); support.len()];
        Self::new(support, probs)
    }

    pub fn support(&self) -> &[BitString] {
        &self.support
    }

    pub fn probs(&self) -> &[Rational64] {
        &self.probs
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &BitString {
        let u = rng.gen_range(0..self.denom);
        let i = self.cumulative.partition_point(|&c| c <= u);
        &self.support[i]
    }

    /// `Σ p(x)` over support points where `a` and `b` differ.
    pub fn disagreement<A, B>(&self, a: A, b: B) -> Result<Rational64>
    where
        A: Fn(&BitString) -> Result<Bit>,
        B: Fn(&BitString) -> Result<Bit>,
    {
        let mut err = Rational64::from_integer(0);
        for (x, p) in self.support.iter().zip(&self.probs) {
            if a(x)? != b(x)? {
                err += p;
            }
        }
        Ok(err)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    E2e,
    Cot,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::E2e => "e2e",
            Mode::Cot => "cot",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Learner {
    /// ERM on end-to-end labels.
    ErmE2e,
    /// ERM on the inflated CoT sample.
    ErmCot,
    /// Boosted compression with `s` inflated draws per round.
    CotCompress { s: usize },
    /// Max-margin stable compression over `tail_d` features.
    LinearStable { d: usize },
}

impl Learner {
    pub fn mode(&self) -> Mode {
        match self {
            Learner::ErmE2e => Mode::E2e,
            _ => Mode::Cot,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Learner::ErmE2e => "erm_e2e",
            Learner::ErmCot => "erm_cot",
            Learner::CotCompress { .. } => "cot_compress",
            Learner::LinearStable { .. } => "linear_stable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Index(usize),
    /// Drawn uniformly from the class at the start of each trial.
    Random,
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub class: Arc<FiniteClass>,
    pub target: Target,
    pub t: usize,
    pub learner: Learner,
    pub m: usize,
    pub distribution: Distribution,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub population_error: Rational64,
    pub kernel_size: Option<usize>,
    pub wall_time_ms: f64,
}

impl TrialConfig {
    fn validate(&self) -> Result<()> {
        if let Target::Index(i) = self.target {
            if i >= self.class.len() {
                return Err(Error::InvalidArgument(format!(
                    "target {i} outside class of size {}",
                    self.class.len()
                )));
            }
        }
        if self.t == 0 {
            return Err(Error::InvalidArgument("T must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Trial `index` of a configuration, drawing from its own derived stream.
///
/// Within a trial the target is drawn first, then the learner seed, then the
/// prompts one by one, so trials with larger `m` extend those with smaller.
pub fn run_trial_indexed(c: &TrialConfig, index: usize) -> Result<TrialResult> {
    c.validate()?;
    let start = Instant::now();
    let mut rng = trial_rng(c.seed, index);
    let target = match c.target {
        Target::Index(i) => &c.class.generators()[i],
        Target::Random => &c.class.generators()[rng.gen_range(0..c.class.len())],
    };
    let learner_seed: u64 = rng.gen();
    let prompts: Vec<BitString> = (0..c.m)
        .map(|_| c.distribution.sample(&mut rng).clone())
        .collect();
    let t = c.t;
    let truth = |x: &BitString| e2e_output(target, x, t);
    let (population_error, kernel_size) = match c.learner {
        Learner::ErmE2e => {
            let sample = prompts
                .iter()
                .map(|x| Ok((x.clone(), truth(x)?)))
                .collect::<Result<Vec<_>>>()?;
            let h = erm_e2e(&c.class, &sample, t)?;
            (c.distribution.disagreement(|x| e2e_output(h, x, t), truth)?, None)
        }
        Learner::ErmCot => {
            let s = CotSample::from_target(target, &prompts, t)?;
            let h = erm(&c.class, &inflate(&s))?;
            (c.distribution.disagreement(|x| e2e_output(h, x, t), truth)?, None)
        }
        Learner::CotCompress { s: draws } => {
            let s = CotSample::from_target(target, &prompts, t)?;
            let comp = cot_compress(&c.class, &s, &CompressConfig::new(draws, learner_seed))?;
            let h = cot_reconstruct(&c.class, &comp)?;
            let err = c.distribution.disagreement(|x| last_of(&h, x, t), truth)?;
            (err, Some(comp.kernel.len()))
        }
        Learner::LinearStable { d } => {
            let s = CotSample::from_target(target, &prompts, t)?;
            let (k, _) = stable_compress_cot(&s, d)?;
            let h = stable_reconstruct_cot(&k, d, c.class.horizon())?;
            let err = c.distribution.disagreement(|x| last_of(&h, x, t), truth)?;
            (err, Some(k.len()))
        }
    };
    Ok(TrialResult {
        population_error,
        kernel_size,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn last_of<G: NextToken + ?Sized>(h: &G, x: &BitString, t: usize) -> Result<Bit> {
    Ok(cot_trace(h, x, t)?.last().expect("T ≥ 1"))
}

pub fn run_trial(c: &TrialConfig) -> Result<TrialResult> {
    run_trial_indexed(c, 0)
}

/// Runs trials `0..r` in parallel; results are in trial order.
pub fn run_trials(c: &TrialConfig, r: usize) -> Result<Vec<TrialResult>> {
    (0..r).into_par_iter().map(|i| run_trial_indexed(c, i)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleComplexity {
    pub m_hat: usize,
    pub failure_rate: f64,
    /// Every probed `(m, failure rate)`, ascending in `m`.
    pub curve: Vec<(usize, f64)>,
}

/// Smallest `m` on a doubling-then-bisection grid whose empirical failure
/// rate `P[error > ε]` over `r` trials is at most `δ`.
pub fn estimate_sample_complexity(
    base: &TrialConfig,
    eps: Rational64,
    delta: Rational64,
    r: usize,
    m_cap: usize,
) -> Result<SampleComplexity> {
    if r == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let mut probed: BTreeMap<usize, f64> = BTreeMap::new();
    let mut probe = |m: usize| -> Result<bool> {
        let cfg = TrialConfig { m, ..base.clone() };
        let fails = run_trials(&cfg, r)?
            .iter()
            .filter(|t| t.population_error > eps)
            .count();
        probed.insert(m, fails as f64 / r as f64);
        Ok(Rational64::from_integer(fails as i64) <= delta * Rational64::from_integer(r as i64))
    };
    let (mut lo, mut hi) = if probe(0)? {
        (0, 0)
    } else {
        let mut m = 1;
        loop {
            if m > m_cap {
                return Err(Error::Unlearnable { cap: m_cap });
            }
            if probe(m)? {
                break (m / 2, m);
            }
            m *= 2;
        }
    };
    // Invariant: `lo` failed (or is 0 with `hi` = 1), `hi` succeeded.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SampleComplexity {
        m_hat: hi,
        failure_rate: probed[&hi],
        curve: probed.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub t: usize,
    pub mode: Mode,
    pub learner: &'static str,
    pub m_hat: usize,
    pub failure_rate: f64,
}

pub fn sweep_t(
    base: &TrialConfig,
    ts: &[usize],
    eps: Rational64,
    delta: Rational64,
    r: usize,
    m_cap: usize,
) -> Result<Vec<SweepRow>> {
    ts.iter()
        .map(|&t| {
            let sc = estimate_sample_complexity(&TrialConfig { t, ..base.clone() }, eps, delta, r, m_cap)?;
            Ok(SweepRow {
                t,
                mode: base.learner.mode(),
                learner: base.learner.name(),
                m_hat: sc.m_hat,
                failure_rate: sc.failure_rate,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::DEFAULT_CAP;
    use crate::classes::parity::q_prompt;
    use crate::classes::{make_parity_class, make_shifted_subset_class, IntervalSet};
    use crate::generator::Generator;

    fn chain(n: usize) -> Vec<BitString> {
        (0..n).map(BitString::zeros).collect()
    }

    fn fn_config(learner: Learner, m: usize) -> TrialConfig {
        let n = IntervalSet::new(vec![1, 3, 4]).unwrap();
        TrialConfig {
            class: Arc::new(make_shifted_subset_class(&n, 8, 24, DEFAULT_CAP).unwrap()),
            target: Target::Random,
            t: 4,
            learner,
            m,
            distribution: Distribution::uniform(chain(8)).unwrap(),
            seed: 5,
        }
    }

    #[test]
    fn distribution_validation_and_sampling() {
        assert!(Distribution::uniform(vec![]).is_err());
        let half = Rational64::new(1, 2);
        assert!(Distribution::new(vec![BitString::zeros(1); 2], vec![half, half]).is_err());
        assert!(Distribution::new(chain(2), vec![half, Rational64::new(1, 3)]).is_err());
        let d = Distribution::new(chain(3), vec![Rational64::new(1, 6), Rational64::new(1, 3), half]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0usize; 3];
        for _ in 0..6000 {
            counts[d.sample(&mut rng).len()] += 1;
        }
        assert!((800..1200).contains(&counts[0]), "{counts:?}");
        assert!((1800..2200).contains(&counts[1]), "{counts:?}");
        assert!((2800..3200).contains(&counts[2]), "{counts:?}");
    }

    #[test]
    fn trial_seeds_are_reproducible() {
        assert_eq!(trial_seed(9, 3), trial_seed(9, 3));
        assert_ne!(trial_seed(9, 3), trial_seed(9, 4));
        assert_ne!(trial_seed(9, 3), trial_seed(10, 3));
        let c = fn_config(Learner::CotCompress { s: 12 }, 10);
        let a: Vec<_> = run_trials(&c, 20).unwrap().into_iter().map(|t| (t.population_error, t.kernel_size)).collect();
        let b: Vec<_> = run_trials(&c, 20).unwrap().into_iter().map(|t| (t.population_error, t.kernel_size)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn covering_sample_gives_zero_error() {
        for learner in [Learner::ErmE2e, Learner::ErmCot, Learner::CotCompress { s: 12 }] {
            let c = fn_config(learner, 200);
            for t in run_trials(&c, 20).unwrap() {
                assert_eq!(t.population_error, Rational64::from_integer(0), "{learner:?}");
            }
        }
    }

    #[test]
    fn empty_sample_uses_first_generator() {
        let mut c = fn_config(Learner::ErmCot, 0);
        c.target = Target::Index(7);
        let first = c.class.get(0).unwrap().clone();
        let target = c.class.get(7).unwrap().clone();
        let expect = c
            .distribution
            .disagreement(|x| e2e_output(&first, x, 4), |x| e2e_output(&target, x, 4))
            .unwrap();
        assert_eq!(run_trial(&c).unwrap().population_error, expect);
        assert!(expect > Rational64::from_integer(0));
    }

    #[test]
    fn singleton_class_needs_no_samples() {
        let mut c = fn_config(Learner::ErmE2e, 0);
        c.class = Arc::new(FiniteClass::new(24, vec![Generator::constant(Bit::One, 24)]).unwrap());
        let sc = estimate_sample_complexity(&c, Rational64::new(1, 10), Rational64::new(1, 10), 50, 64).unwrap();
        assert_eq!(sc.m_hat, 0);
        assert_eq!(sweep_t(&c, &[], Rational64::new(1, 10), Rational64::new(1, 10), 50, 64).unwrap(), vec![]);
    }

    #[test]
    fn search_finds_the_threshold() {
        let c = fn_config(Learner::ErmCot, 0);
        let sc = estimate_sample_complexity(&c, Rational64::new(1, 10), Rational64::new(1, 10), 60, 4096).unwrap();
        assert!(sc.m_hat > 0);
        assert!(sc.failure_rate <= 0.1);
        let below: Vec<_> = sc.curve.iter().filter(|(m, _)| *m == sc.m_hat - 1).collect();
        assert!(below.iter().all(|(_, f)| *f > 0.1));
    }

    #[test]
    fn unlearnable_within_cap() {
        let n = IntervalSet::new(vec![1]).unwrap();
        let class = make_shifted_subset_class(&n, 3, 8, DEFAULT_CAP).unwrap();
        let d = Distribution::new(
            chain(2),
            vec![Rational64::new(1, 2), Rational64::new(1, 2)],
        )
        .unwrap();
        let c = TrialConfig {
            class: Arc::new(class),
            target: Target::Index(1),
            t: 1,
            learner: Learner::ErmE2e,
            m: 0,
            distribution: d,
            seed: 0,
        };
        // The empty sample errs on "" and the cap forbids anything larger.
        assert!(matches!(
            estimate_sample_complexity(&c, Rational64::new(1, 4), Rational64::new(0, 1), 50, 0),
            Err(Error::Unlearnable { cap: 0 })
        ));
    }

    #[test]
    fn parity_even_t_needs_no_samples() {
        let class = make_parity_class(8, 40, DEFAULT_CAP).unwrap();
        let c = TrialConfig {
            class: Arc::new(class),
            target: Target::Random,
            t: 2,
            learner: Learner::ErmE2e,
            m: 0,
            distribution: Distribution::uniform((1..=8).map(q_prompt).collect()).unwrap(),
            seed: 3,
        };
        let rows = sweep_t(&c, &[2, 4], Rational64::new(1, 10), Rational64::new(1, 10), 50, 64).unwrap();
        assert!(rows.iter().all(|r| r.m_hat == 0));
    }
}
