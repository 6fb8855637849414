//! Binary alphabet and finite strings over it.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A symbol of the binary alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn is_one(self) -> bool {
        self == Bit::One
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
        }
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

impl From<Bit> for bool {
    fn from(b: Bit) -> Self {
        b.is_one()
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A finite bit string. Ordering is lexicographic with a proper prefix
/// sorting before its extensions.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    bits: Vec<Bit>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            bits: Vec::with_capacity(n),
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = Bit>) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }

    /// `bit` repeated `n` times.
    pub fn repeat(bit: Bit, n: usize) -> Self {
        Self {
            bits: vec![bit; n],
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::repeat(Bit::Zero, n)
    }

    /// The `width` low-order bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        Self::from_bits((0..width).rev().map(|i| Bit::from((value >> i) & 1 == 1)))
    }

    /// Interprets the string as a big-endian integer. Panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len() <= 64, "bit string too long for u64");
        self.bits
            .iter()
            .fold(0u64, |acc, b| (acc << 1) | b.as_u8() as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[Bit] {
        &self.bits
    }

    /// Zero-based access.
    pub fn get(&self, i: usize) -> Option<Bit> {
        self.bits.get(i).copied()
    }

    pub fn last(&self) -> Option<Bit> {
        self.bits.last().copied()
    }

    pub fn push(&mut self, b: Bit) {
        self.bits.push(b);
    }

    pub fn pop(&mut self) -> Option<Bit> {
        self.bits.pop()
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn appended(&self, b: Bit) -> BitString {
        let mut out = self.clone();
        out.push(b);
        out
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.bits.starts_with(&prefix.bits)
    }

    pub fn prefix(&self, len: usize) -> BitString {
        BitString {
            bits: self.bits[..len.min(self.len())].to_vec(),
        }
    }

    pub fn suffix_from(&self, start: usize) -> BitString {
        BitString {
            bits: self.bits[start.min(self.len())..].to_vec(),
        }
    }

    /// Number of leading zeros.
    pub fn leading_zeros(&self) -> usize {
        self.bits.iter().take_while(|b| **b == Bit::Zero).count()
    }

    pub fn is_all_zero(&self) -> bool {
        self.bits.iter().all(|b| *b == Bit::Zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = Bit> + '_ {
        self.bits.iter().copied()
    }

    /// All strings of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "cannot enumerate 2^{n} strings");
        (0..(1u64 << n)).map(move |v| BitString::from_u64(v, n))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        // The quoted empty string is the canonical serialization of the empty word.
        let s = if s == "\"\"" { "" } else { s };
        s.chars()
            .map(|c| match c {
                '0' => Ok(Bit::Zero),
                '1' => Ok(Bit::One),
                other => Err(Error::Parse(format!(
                    "invalid character {other:?} in bit string {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|bits| BitString { bits })
    }
}

impl FromIterator<Bit> for BitString {
    fn from_iter<I: IntoIterator<Item = Bit>>(iter: I) -> Self {
        Self::from_bits(iter)
    }
}

impl From<&[Bit]> for BitString {
    fn from(bits: &[Bit]) -> Self {
        Self {
            bits: bits.to_vec(),
        }
    }
}

/// Shorthand for tests and examples; panics on anything but `0`/`1`.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}

/// ASCII serialization where the empty string is written as `""`.
pub fn to_csv_field(s: &BitString) -> String {
    if s.is_empty() {
        "\"\"".to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        assert_eq!(bs("0110").to_string(), "0110");
        assert_eq!(bs("").len(), 0);
        assert_eq!("\"\"".parse::<BitString>().unwrap(), BitString::new());
        assert!("012".parse::<BitString>().is_err());
    }

    #[test]
    fn concat_is_associative() {
        let (a, b, c) = (bs("01"), bs(""), bs("110"));
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        assert_eq!(a.concat(&c).len(), 5);
    }

    #[test]
    fn prefix_order() {
        assert!(bs("").is_prefix_of(&bs("101")));
        assert!(bs("10").is_prefix_of(&bs("101")));
        assert!(!bs("11").is_prefix_of(&bs("101")));
        assert!(bs("10") < bs("100"));
        assert!(bs("011") < bs("1"));
    }

    #[test]
    fn integer_encoding() {
        assert_eq!(BitString::from_u64(5, 4), bs("0101"));
        assert_eq!(bs("0101").to_u64(), 5);
        let all: Vec<_> = BitString::all_of_length(2).collect();
        assert_eq!(all, vec![bs("00"), bs("01"), bs("10"), bs("11")]);
    }

    #[test]
    fn csv_field_quotes_empty() {
        assert_eq!(to_csv_field(&bs("")), "\"\"");
        assert_eq!(to_csv_field(&bs("10")), "10");
    }
}
