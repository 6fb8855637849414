//! Samples, inflation and the learners built on top of it.

pub mod compress;
pub mod linear;

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::bits::{Bit, BitString};
use crate::class::FiniteClass;
use crate::error::{Error, Result};
use crate::generator::{cot_trace, e2e_output, Generator, NextToken};

pub use compress::{
    cot_compress, cot_reconstruct, CompressConfig, CompressedCot, MajorityHypothesis,
};
pub use linear::{max_margin, stable_compress_cot, stable_reconstruct_cot, MaxMargin};

/// Prompt/trace pairs sharing one generation length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotSample {
    t: usize,
    examples: Vec<(BitString, BitString)>,
}

impl CotSample {
    pub fn new(t: usize, examples: Vec<(BitString, BitString)>) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument("trace length must be ≥ 1".into()));
        }
        if let Some((x, y)) = examples.iter().find(|(_, y)| y.len() != t) {
            return Err(Error::InvalidArgument(format!(
                "trace {y:?} for prompt {x:?} has length {} ≠ {t}",
                y.len()
            )));
        }
        Ok(Self { t, examples })
    }

    /// Like [`CotSample::new`], additionally requiring a consistent member of
    /// `class`.
    pub fn new_realizable(
        class: &FiniteClass,
        t: usize,
        examples: Vec<(BitString, BitString)>,
    ) -> Result<Self> {
        let s = Self::new(t, examples)?;
        erm(class, &inflate(&s))?;
        Ok(s)
    }

    /// Labels `prompts` with the traces of `target`.
    pub fn from_target<G: NextToken + ?Sized>(
        target: &G,
        prompts: &[BitString],
        t: usize,
    ) -> Result<Self> {
        let examples = prompts
            .iter()
            .map(|x| Ok((x.clone(), cot_trace(target, x, t)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(t, examples)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[(BitString, BitString)] {
        &self.examples
    }

    /// Sub-sample at the given positions, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            t: self.t,
            examples: indices.iter().map(|&i| self.examples[i].clone()).collect(),
        }
    }

    /// The sample without position `i`.
    pub fn without(&self, i: usize) -> Self {
        let mut examples = self.examples.clone();
        examples.remove(i);
        Self { t: self.t, examples }
    }

    /// Whether the CoT map of `h` reproduces every trace.
    pub fn is_consistent<G: NextToken + ?Sized>(&self, h: &G) -> Result<bool> {
        for (x, y) in &self.examples {
            if &cot_trace(h, x, self.t)? != y {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryExample {
    pub x: BitString,
    pub y: Bit,
    /// Index of the CoT example this one was unrolled from.
    pub origin: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BinarySample {
    pub examples: Vec<BinaryExample>,
}

impl BinarySample {
    pub fn new(examples: Vec<BinaryExample>) -> Self {
        Self { examples }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (BitString, Bit)>) -> Self {
        Self {
            examples: pairs
                .into_iter()
                .map(|(x, y)| BinaryExample { x, y, origin: None })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BinaryExample> {
        self.examples.iter()
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            examples: indices.iter().map(|&i| self.examples[i].clone()).collect(),
        }
    }

    pub fn is_consistent<G: NextToken + ?Sized>(&self, h: &G) -> Result<bool> {
        for e in &self.examples {
            if h.next_bit(&e.x)? != e.y {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `U(S)`: every `(x, y)` becomes `(x ∘ y_{<t}, y_t)` for `t = 1..=T`.
pub fn inflate(s: &CotSample) -> BinarySample {
    let mut out = Vec::with_capacity(s.len() * s.t());
    for (i, (x, y)) in s.examples().iter().enumerate() {
        let mut prefix = x.clone();
        for b in y.iter() {
            out.push(BinaryExample {
                x: prefix.clone(),
                y: b,
                origin: Some(i),
            });
            prefix.push(b);
        }
    }
    BinarySample { examples: out }
}

/// Sorted distinct origins of an inflated sub-sample.
pub fn deflate_indices(a: &BinarySample) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = a
        .iter()
        .map(|e| e.origin.ok_or(Error::OriginMissing))
        .collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

/// `U^{-1}`: the CoT examples the inflated examples came from, in sample order.
pub fn deflate(a: &BinarySample, s: &CotSample) -> Result<CotSample> {
    let idx = deflate_indices(a)?;
    if let Some(&bad) = idx.iter().find(|&&i| i >= s.len()) {
        return Err(Error::InvalidArgument(format!(
            "origin {bad} outside sample of size {}",
            s.len()
        )));
    }
    Ok(s.select(&idx))
}

/// Index of the first member consistent with `a`.
pub fn erm_index(class: &FiniteClass, a: &BinarySample) -> Result<usize> {
    let hits: Vec<Result<bool>> = class
        .generators()
        .par_iter()
        .map(|f| a.is_consistent(f))
        .collect();
    for (i, h) in hits.into_iter().enumerate() {
        if h? {
            return Ok(i);
        }
    }
    Err(Error::NotRealizable)
}

/// The first member of `class`, in class order, consistent with `a`.
pub fn erm<'a>(class: &'a FiniteClass, a: &BinarySample) -> Result<&'a Generator> {
    erm_index(class, a).map(|i| &class.generators()[i])
}

/// ERM on end-to-end labels: first member whose `T`-step final bit matches.
pub fn erm_e2e<'a>(
    class: &'a FiniteClass,
    sample: &[(BitString, Bit)],
    t: usize,
) -> Result<&'a Generator> {
    let hits: Vec<Result<bool>> = class
        .generators()
        .par_iter()
        .map(|f| {
            for (x, y) in sample {
                if e2e_output(f, x, t)? != *y {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    for (i, h) in hits.into_iter().enumerate() {
        if h? {
            return Ok(&class.generators()[i]);
        }
    }
    Err(Error::NotRealizable)
}
