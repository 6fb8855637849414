//! Lower-bound experiment on the parity class at odd `T`.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;

use crate::bits::{Bit, BitString};
use crate::class::{FiniteClass, DEFAULT_CAP};
use crate::classes::parity::q_prompt;
use crate::classes::make_parity_class;
use crate::error::{Error, Result};
use crate::generator::{cot_trace, e2e_output};
use crate::harness::{trial_rng, Learner};
use crate::learners::{cot_compress, cot_reconstruct, erm, inflate, CompressConfig, CotSample};

#[derive(Clone, Debug)]
pub struct ParityExperiment {
    pub k_max: usize,
    /// Training prompts per trial.
    pub n: usize,
    /// Support `Q_1..Q_m`; defaults to `2n`.
    pub m: Option<usize>,
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
    pub learner: Learner,
}

impl ParityExperiment {
    pub fn new(k_max: usize, n: usize, trials: usize, seed: u64) -> Self {
        Self {
            k_max,
            n,
            m: None,
            t: 3,
            trials,
            seed,
            learner: Learner::CotCompress { s: 12 },
        }
    }

    pub fn support_size(&self) -> usize {
        self.m.unwrap_or(2 * self.n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParityStats {
    pub trials: usize,
    /// Fraction of trials with error ≥ 1/4.
    pub frequency: f64,
    pub mean_error: f64,
    /// Per trial: (unseen support indices `|J|`, how many of them the
    /// learner gets wrong).
    pub bad_counts: Vec<(usize, usize)>,
    /// Trials with the bad count above / below `|J|/2`.
    pub above: usize,
    pub below: usize,
    /// Two-sided sign-test p-value of `above` vs `below`.
    pub sign_p_value: f64,
}

/// `P[|X - n/2| ≥ |k - n/2|]` for `X ~ Bin(n, 1/2)`.
pub fn sign_test_p_value(k: usize, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let tail = k.min(n - k);
    let mut pmf = 0.5f64.powi(n as i32);
    let mut sum = 0.0;
    for i in 0..=tail {
        sum += pmf;
        pmf *= (n - i) as f64 / (i + 1) as f64;
    }
    (2.0 * sum).min(1.0)
}

/// Draws `b` uniformly, trains on `n` uniform draws from `Q_1..Q_m` and
/// measures the exact error of the learner under that distribution.
pub fn parity_lower_bound_experiment(e: &ParityExperiment) -> Result<ParityStats> {
    let m = e.support_size();
    if m == 0 || e.k_max < m {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ m ≤ k_max, got m = {m}, k_max = {}",
            e.k_max
        )));
    }
    if e.t.is_multiple_of(2) {
        return Err(Error::InvalidArgument("T must be odd".into()));
    }
    let horizon = e.k_max + 2 + e.t;
    let class = make_parity_class(e.k_max, horizon, DEFAULT_CAP)?;
    let support: Vec<BitString> = (1..=m).map(q_prompt).collect();
    let rows: Vec<(f64, usize, usize)> = (0..e.trials)
        .into_par_iter()
        .map(|i| trial(e, &class, &support, i))
        .collect::<Result<_>>()?;
    let r = rows.len().max(1) as f64;
    let frequency = rows.iter().filter(|(err, _, _)| *err >= 0.25).count() as f64 / r;
    let mean_error = rows.iter().map(|(err, _, _)| err).sum::<f64>() / r;
    let bad_counts: Vec<(usize, usize)> = rows.iter().map(|&(_, j, b)| (j, b)).collect();
    let above = bad_counts.iter().filter(|&&(j, b)| 2 * b > j).count();
    let below = bad_counts.iter().filter(|&&(j, b)| 2 * b < j).count();
    Ok(ParityStats {
        trials: rows.len(),
        frequency,
        mean_error,
        bad_counts,
        above,
        below,
        sign_p_value: sign_test_p_value(above, above + below),
    })
}

fn trial(
    e: &ParityExperiment,
    class: &FiniteClass,
    support: &[BitString],
    index: usize,
) -> Result<(f64, usize, usize)> {
    let mut rng = trial_rng(e.seed, index);
    let target = &class.generators()[rng.gen_range(0..class.len())];
    let learner_seed: u64 = rng.gen();
    let drawn: Vec<usize> = (0..e.n).map(|_| rng.gen_range(0..support.len())).collect();
    let prompts: Vec<BitString> = drawn.iter().map(|&k| support[k].clone()).collect();
    let s = CotSample::from_target(target, &prompts, e.t)?;
    let predict: Box<dyn Fn(&BitString) -> Result<Bit>> = match e.learner {
        Learner::ErmCot => {
            let h = erm(class, &inflate(&s))?.clone();
            Box::new(move |x| e2e_output(&h, x, e.t))
        }
        Learner::CotCompress { s: draws } => {
            let c = cot_compress(class, &s, &CompressConfig::new(draws, learner_seed))?;
            let h = cot_reconstruct(class, &c)?;
            Box::new(move |x| Ok(cot_trace(&h, x, e.t)?.last().expect("T ≥ 1")))
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "{} is not a CoT learner for this class",
                other.name()
            )))
        }
    };
    let seen: BTreeSet<usize> = drawn.into_iter().collect();
    let mut wrong = 0;
    let mut unseen = 0;
    let mut bad = 0;
    for (k, x) in support.iter().enumerate() {
        let miss = predict(x)? != e2e_output(target, x, e.t)?;
        wrong += miss as usize;
        if !seen.contains(&k) {
            unseen += 1;
            bad += miss as usize;
        }
    }
    Ok((wrong as f64 / support.len() as f64, unseen, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_values() {
        assert_eq!(sign_test_p_value(0, 0), 1.0);
        assert!((sign_test_p_value(0, 1) - 1.0).abs() < 1e-12);
        assert!((sign_test_p_value(0, 4) - 0.125).abs() < 1e-12);
        assert!((sign_test_p_value(10, 10) - 2.0 / 1024.0).abs() < 1e-12);
        assert!((sign_test_p_value(5, 10) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_data_means_high_error() {
        let mut e = ParityExperiment::new(8, 0, 100, 1);
        e.m = Some(8);
        let st = parity_lower_bound_experiment(&e).unwrap();
        assert!(st.frequency > 0.9, "{st:?}");
        assert!((st.mean_error - 0.5).abs() < 0.1);
    }

    #[test]
    fn lower_bound_holds_for_both_learners() {
        for learner in [Learner::ErmCot, Learner::CotCompress { s: 12 }] {
            let mut e = ParityExperiment::new(8, 4, 200, 11);
            e.learner = learner;
            let st = parity_lower_bound_experiment(&e).unwrap();
            assert!(st.frequency >= 0.4, "{learner:?}: {st:?}");
            assert!(st.sign_p_value > 0.001, "{learner:?}: {st:?}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let e = ParityExperiment::new(4, 3, 10, 0);
        assert!(parity_lower_bound_experiment(&e).is_err());
        let mut e = ParityExperiment::new(8, 2, 10, 0);
        e.t = 2;
        assert!(parity_lower_bound_experiment(&e).is_err());
    }
}
