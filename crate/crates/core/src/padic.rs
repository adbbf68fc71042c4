//! 2-adic and 4-adic encodings of bit-string states, shift-map collapse
//! (drop one trailing digit per step), and the ultrametric distance under
//! which closeness means agreement of leading digits.

use std::fmt;
use std::str::FromStr;

use num_traits::checked_pow;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::bitstring::HiddenPermutation;
use crate::entangle::EntangledPair;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// A base-p word, most-significant digit first. Serialized as plain digit
/// strings ("10011010"); parsing infers base 2 unless a digit above 1
/// appears, so a base-4 word whose digits all happen to be 0/1 reads back
/// as base 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicWord {
    base: u8,
    digits: Vec<u8>,
}

impl Serialize for PadicWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PadicWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl PadicWord {
    pub fn new(base: u8, digits: Vec<u8>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument("base must be >= 2".into()));
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::BadDigit { digit: bad, base });
        }
        Ok(PadicWord { base, digits })
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Applies a hidden permutation to the digit positions.
    pub fn permute(&self, xi: &HiddenPermutation) -> Result<PadicWord> {
        Ok(PadicWord {
            base: self.base,
            digits: xi.apply(&self.digits)?,
        })
    }
}

impl fmt::Display for PadicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for PadicWord {
    type Err = Error;

    /// Parses a digit string as base 2 when only 0/1 appear, base 4 when
    /// digits up to 3 appear.
    fn from_str(s: &str) -> Result<Self> {
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::InvalidArgument(format!("bad digit {c:?}")))?
                as u8;
            digits.push(d);
        }
        if digits.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        let base = if digits.iter().all(|&d| d < 2) { 2 } else { 4 };
        PadicWord::new(base, digits)
    }
}

/// State reduction from a length-L word to a single digit, one trailing
/// digit removed per step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseTrace {
    pub steps: Vec<PadicWord>,
    pub step_count: usize,
}

/// Maps +1 to 1 and -1 to 0, preserving order.
pub fn encode_2adic(bits: &[i8]) -> PadicWord {
    PadicWord {
        base: 2,
        digits: bits.iter().map(|&b| u8::from(b > 0)).collect(),
    }
}

/// Inverse of `encode_2adic`.
pub fn decode_2adic(word: &PadicWord) -> Result<Vec<i8>> {
    if word.base != 2 {
        return Err(Error::BaseMismatch(word.base, 2));
    }
    Ok(word.digits.iter().map(|&d| if d > 0 { 1 } else { -1 }).collect())
}

/// Interleaves an entangled pair into one base-4 word:
/// digit[i] = 2 * alice01[i] + bob01[i]. Canonical (pre-permutation) order.
pub fn encode_4adic(pair: &EntangledPair) -> Result<PadicWord> {
    encode_4adic_bits(pair.alice_bits(), pair.bob_bits())
}

pub fn encode_4adic_bits(alice: &[i8], bob: &[i8]) -> Result<PadicWord> {
    if alice.len() != bob.len() {
        return Err(Error::LengthMismatch(alice.len(), bob.len()));
    }
    let digits = alice
        .iter()
        .zip(bob)
        .map(|(&a, &b)| 2 * u8::from(a > 0) + u8::from(b > 0))
        .collect();
    Ok(PadicWord { base: 4, digits })
}

/// Splits a base-4 word back into the two base-2 words it interleaves.
pub fn split_4adic(word: &PadicWord) -> Result<(PadicWord, PadicWord)> {
    if word.base != 4 {
        return Err(Error::BaseMismatch(word.base, 4));
    }
    let alice = word.digits.iter().map(|&d| d >> 1).collect();
    let bob = word.digits.iter().map(|&d| d & 1).collect();
    Ok((
        PadicWord { base: 2, digits: alice },
        PadicWord { base: 2, digits: bob },
    ))
}

/// Repeatedly removes the trailing (least significant) digit until one
/// digit remains, recording every intermediate word. A length-L word
/// collapses in exactly L - 1 steps.
pub fn shift_collapse(word: &PadicWord) -> Result<CollapseTrace> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("empty word".into()));
    }
    let mut steps = Vec::with_capacity(word.len());
    let mut current = word.clone();
    steps.push(current.clone());
    while current.len() > 1 {
        current.digits.pop();
        steps.push(current.clone());
    }
    Ok(CollapseTrace {
        step_count: steps.len() - 1,
        steps,
    })
}

/// p-adic distance between equal-length, equal-base words: p^(-k) where k
/// leading digits agree; 0 iff identical.
pub fn padic_distance(x: &PadicWord, y: &PadicWord) -> Result<Rational> {
    if x.base != y.base {
        return Err(Error::BaseMismatch(x.base, y.base));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let agree = x
        .digits
        .iter()
        .zip(&y.digits)
        .take_while(|(a, b)| a == b)
        .count();
    if agree == x.len() {
        return Ok(Rational::zero());
    }
    let denom = checked_pow(x.base as i64, agree)
        .ok_or_else(|| Error::InvalidArgument("distance denominator overflow".into()))?;
    Ok(Rational::new(1, denom))
}
