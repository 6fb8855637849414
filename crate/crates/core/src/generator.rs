//! Next-token generators and autoregressive evolution.
//!
//! A generator maps a bit string to a single bit. Iterating the
//! apply-and-append map `x -> x ∘ f(x)` for `T` steps produces the
//! chain of thought (the last `T` bits) and its final bit, the end-to-end
//! output.

use crate::bits::{Bit, BitString};
use crate::classes::linear::LinearParams;
use crate::classes::parity::ParityParams;
use crate::classes::shifted::ShiftedSubsetParams;
use crate::classes::{atdim_example, product};
use crate::error::{Error, Result};

/// Anything that predicts the next bit of a string up to a fixed horizon.
pub trait NextToken {
    /// Maximum string length `H`; evaluation is defined for `|x| < H`.
    fn horizon(&self) -> usize;

    fn next_bit(&self, x: &BitString) -> Result<Bit>;
}

/// Closed-form constructions. Each variant evaluates without truth tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Constant(Bit),
    /// `f_a`: reveals `a_{|x|+1}` along the prefix chain of `a`, else 0.
    PrefixReveal { sequence: BitString },
    /// `f_{s+A}`: prefix reveal of the indicator sequence of `s + A`.
    ShiftedSubset(ShiftedSubsetParams),
    /// Parts relocated behind the prefix code `0^i 1`, `i = 1..=parts.len()`.
    Product { parts: Vec<Generator> },
    Linear(LinearParams),
    Parity(ParityParams),
    /// Branch generator of the labeled-tree construction (nodes labeled `0^i`).
    BranchTree { depth: usize, branch: BitString },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    kind: GeneratorKind,
    horizon: usize,
}

impl Generator {
    pub fn new(kind: GeneratorKind, horizon: usize) -> Self {
        Self { kind, horizon }
    }

    pub fn constant(bit: Bit, horizon: usize) -> Self {
        Self::new(GeneratorKind::Constant(bit), horizon)
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    /// Short human-readable tag used in reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            GeneratorKind::Constant(b) => format!("const({b})"),
            GeneratorKind::PrefixReveal { sequence } => format!("reveal({sequence})"),
            GeneratorKind::ShiftedSubset(p) => format!("shift({}+{:?})", p.shift, p.members),
            GeneratorKind::Product { parts } => {
                let inner: Vec<_> = parts.iter().map(|g| g.describe()).collect();
                format!("product[{}]", inner.join(";"))
            }
            GeneratorKind::Linear(p) => format!("linear({p})"),
            GeneratorKind::Parity(p) => format!("parity({})", p.b),
            GeneratorKind::BranchTree { branch, .. } => format!("branch({branch})"),
        }
    }

    fn eval_unchecked(&self, x: &BitString) -> Result<Bit> {
        Ok(match &self.kind {
            GeneratorKind::Constant(b) => *b,
            GeneratorKind::PrefixReveal { sequence } => {
                if x.len() < sequence.len() && x.is_prefix_of(sequence) {
                    sequence.get(x.len()).unwrap_or(Bit::Zero)
                } else {
                    Bit::Zero
                }
            }
            GeneratorKind::ShiftedSubset(p) => p.eval(x),
            GeneratorKind::Product { parts } => return product::eval(parts, x),
            GeneratorKind::Linear(p) => p.eval(x),
            GeneratorKind::Parity(p) => p.eval(x),
            GeneratorKind::BranchTree { depth, branch } => {
                atdim_example::eval_branch(*depth, branch, x)
            }
        })
    }
}

impl NextToken for Generator {
    fn horizon(&self) -> usize {
        self.horizon
    }

    fn next_bit(&self, x: &BitString) -> Result<Bit> {
        if x.len() >= self.horizon {
            return Err(Error::HorizonExceeded {
                len: x.len(),
                horizon: self.horizon,
            });
        }
        self.eval_unchecked(x)
    }
}

impl<G: NextToken + ?Sized> NextToken for &G {
    fn horizon(&self) -> usize {
        (**self).horizon()
    }

    fn next_bit(&self, x: &BitString) -> Result<Bit> {
        (**self).next_bit(x)
    }
}

/// `x ∘ f(x)`.
pub fn apply_and_append<G: NextToken + ?Sized>(f: &G, x: &BitString) -> Result<BitString> {
    let b = f.next_bit(x)?;
    Ok(x.appended(b))
}

fn check_window<G: NextToken + ?Sized>(f: &G, x: &BitString, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "generation length must be at least 1".into(),
        ));
    }
    if x.len() + t > f.horizon() {
        return Err(Error::HorizonExceeded {
            len: x.len() + t - 1,
            horizon: f.horizon(),
        });
    }
    Ok(())
}

/// The last `t` symbols of the `t`-fold apply-and-append iteration.
pub fn cot_trace<G: NextToken + ?Sized>(f: &G, x: &BitString, t: usize) -> Result<BitString> {
    check_window(f, x, t)?;
    let mut buf = BitString::with_capacity(x.len() + t);
    for b in x.iter() {
        buf.push(b);
    }
    for _ in 0..t {
        let b = f.next_bit(&buf)?;
        buf.push(b);
    }
    Ok(buf.suffix_from(x.len()))
}

/// Final bit of [`cot_trace`].
pub fn e2e_output<G: NextToken + ?Sized>(f: &G, x: &BitString, t: usize) -> Result<Bit> {
    check_window(f, x, t)?;
    let mut buf = x.clone();
    let mut last = Bit::Zero;
    for _ in 0..t {
        last = f.next_bit(&buf)?;
        buf.push(last);
    }
    Ok(last)
}
