//! Sample compression for CoT learning by boosting ERM on small sub-samples.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::{Bit, BitString};
use crate::class::FiniteClass;
use crate::error::{Error, Result};
use crate::generator::{cot_trace, Generator, NextToken};
use crate::learners::{deflate_indices, erm, inflate, BinarySample, CotSample};

#[derive(Clone, Debug)]
pub struct CompressConfig {
    /// Inflated examples drawn per round.
    pub s: usize,
    pub n_max: usize,
    /// Draws per round before giving up on a weak hypothesis.
    pub retry_cap: usize,
    pub seed: u64,
}

impl CompressConfig {
    pub fn new(s: usize, seed: u64) -> Self {
        Self {
            s,
            n_max: 400,
            retry_cap: 20,
            seed,
        }
    }
}

/// A kernel of CoT examples plus, per round, the kernel positions it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedCot {
    pub kernel: CotSample,
    /// Positions in the original sample of the kernel examples.
    pub kernel_origin: Vec<usize>,
    pub side_info: Vec<Vec<usize>>,
}

impl CompressedCot {
    pub fn rounds(&self) -> usize {
        self.side_info.len()
    }

    /// Bits needed to name the side information: one kernel index per slot.
    pub fn side_info_bits(&self) -> f64 {
        let slots: usize = self.side_info.iter().map(Vec::len).sum();
        slots as f64 * (self.kernel.len().max(2) as f64).log2()
    }
}

/// Majority vote over next-token maps, ties going to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorityHypothesis {
    voters: Vec<Generator>,
    horizon: usize,
}

impl MajorityHypothesis {
    pub fn new(voters: Vec<Generator>) -> Self {
        let horizon = voters.iter().map(|g| g.horizon()).min().unwrap_or(usize::MAX);
        Self { voters, horizon }
    }

    pub fn voters(&self) -> &[Generator] {
        &self.voters
    }

    pub fn cot(&self, x: &BitString, t: usize) -> Result<BitString> {
        cot_trace(self, x, t)
    }
}

impl NextToken for MajorityHypothesis {
    fn horizon(&self) -> usize {
        self.horizon
    }

    fn next_bit(&self, x: &BitString) -> Result<Bit> {
        let mut ones = 0;
        for v in &self.voters {
            if v.next_bit(x)?.is_one() {
                ones += 1;
            }
        }
        Ok(Bit::from(2 * ones > self.voters.len()))
    }
}

fn predictions(h: &Generator, u: &BinarySample) -> Result<Vec<bool>> {
    u.iter().map(|e| Ok(h.next_bit(&e.x)? == e.y)).collect()
}

/// Compresses a realizable sample into a kernel from which
/// [`cot_reconstruct`] recovers a consistent CoT hypothesis.
///
/// Each round draws `s` inflated examples by the current weights, takes the
/// CoT examples they came from, and keeps the ERM on their inflation if its
/// weighted error is at most 1/3. Misclassified weights double. Stops once
/// the majority of the kept hypotheses is correct on every inflated example.
pub fn cot_compress(class: &FiniteClass, s: &CotSample, cfg: &CompressConfig) -> Result<CompressedCot> {
    let u = inflate(s);
    let first = erm(class, &BinarySample::default())?;
    if predictions(first, &u)?.iter().all(|&c| c) {
        return Ok(CompressedCot {
            kernel: s.select(&[]),
            kernel_origin: Vec::new(),
            side_info: vec![Vec::new()],
        });
    }
    let n = u.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut weights = vec![1.0f64; n];
    // Votes for the correct label, per inflated example.
    let mut correct_votes = vec![0usize; n];
    let mut rounds: Vec<Vec<usize>> = Vec::new();
    while rounds.len() < cfg.n_max {
        let dist = WeightedIndex::new(&weights)
            .map_err(|e| Error::BoostingFailed(format!("weights: {e}")))?;
        let total: f64 = weights.iter().sum();
        let mut accepted = None;
        for _ in 0..cfg.retry_cap.max(1) {
            let draw: Vec<usize> = (0..cfg.s).map(|_| dist.sample(&mut rng)).collect();
            let origins = deflate_indices(&u.select(&draw))?;
            let h = erm(class, &inflate(&s.select(&origins)))?;
            let ok = predictions(h, &u)?;
            let err: f64 = ok
                .iter()
                .zip(&weights)
                .filter(|(&c, _)| !c)
                .map(|(_, w)| w)
                .sum();
            if 3.0 * err <= total {
                accepted = Some((origins, ok));
                break;
            }
        }
        let Some((origins, ok)) = accepted else {
            return Err(Error::BoostingFailed(format!(
                "no weak hypothesis within {} draws in round {}",
                cfg.retry_cap,
                rounds.len() + 1
            )));
        };
        for (i, &c) in ok.iter().enumerate() {
            if c {
                correct_votes[i] += 1;
            } else {
                weights[i] *= 2.0;
            }
        }
        rounds.push(origins);
        let r = rounds.len();
        // With ties going to 0, a label-1 example needs a strict majority of
        // correct votes and a label-0 example needs at least half.
        let done = u.iter().zip(&correct_votes).all(|(e, &c)| {
            if e.y.is_one() {
                2 * c > r
            } else {
                2 * c >= r
            }
        });
        if done {
            return Ok(assemble(s, rounds));
        }
    }
    Err(Error::BoostingFailed(format!(
        "majority not consistent after {} rounds",
        cfg.n_max
    )))
}

fn assemble(s: &CotSample, rounds: Vec<Vec<usize>>) -> CompressedCot {
    let mut kernel_origin: Vec<usize> = rounds.iter().flatten().copied().collect();
    kernel_origin.sort_unstable();
    kernel_origin.dedup();
    let side_info = rounds
        .iter()
        .map(|r| {
            r.iter()
                .map(|i| kernel_origin.binary_search(i).expect("round index in kernel"))
                .collect()
        })
        .collect();
    CompressedCot {
        kernel: s.select(&kernel_origin),
        kernel_origin,
        side_info,
    }
}

/// Majority of the ERMs on each round's kernel sub-sample.
pub fn cot_reconstruct(class: &FiniteClass, c: &CompressedCot) -> Result<MajorityHypothesis> {
    let voters = c
        .side_info
        .iter()
        .map(|r| Ok(erm(class, &inflate(&c.kernel.select(r)))?.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(MajorityHypothesis::new(voters))
}
