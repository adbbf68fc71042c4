//! Single-qubit states as length-L strings over {+1, -1} with a hidden
//! permutation deciding which bit a measurement reveals. The fraction of
//! +1 bits carries cos^2(theta/2) = m/L and the cyclic rotation carries the
//! phase phi = 2*pi*n/L.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Number of bits per qubit string. The default 3600 is divisible by
/// 4, 8, 9, 16, 25 and 360, so common angles land exactly on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretisationLevel(usize);

pub const DEFAULT_LEVEL: usize = 3600;

impl DiscretisationLevel {
    pub fn new(level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::OutOfRange {
                what: "L",
                got: 0,
                limit: usize::MAX,
            });
        }
        Ok(DiscretisationLevel(level))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl Default for DiscretisationLevel {
    fn default() -> Self {
        DiscretisationLevel(DEFAULT_LEVEL)
    }
}

/// A seed-addressable permutation of {0..L-1}, the hidden variable fixed
/// when a particle is created. Identical (seed, L) always reproduce the
/// identical mapping, so experiments replay exactly.
///
/// `source_of[j]` is the pre-permutation index whose bit lands at position
/// j after the permutation is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenPermutation {
    seed: u64,
    source_of: Vec<u32>,
}

impl HiddenPermutation {
    /// Fisher-Yates shuffle driven by a ChaCha stream keyed on `seed`.
    pub fn from_seed(seed: u64, len: usize) -> Result<Self> {
        if len == 0 || len > u32::MAX as usize {
            return Err(Error::OutOfRange {
                what: "permutation length",
                got: len,
                limit: u32::MAX as usize,
            });
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut source_of: Vec<u32> = (0..len as u32).collect();
        for i in (1..len).rev() {
            let j = rng.random_range(0..=i);
            source_of.swap(i, j);
        }
        Ok(HiddenPermutation { seed, source_of })
    }

    pub fn identity(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::OutOfRange {
                what: "permutation length",
                got: 0,
                limit: usize::MAX,
            });
        }
        Ok(HiddenPermutation {
            seed: 0,
            source_of: (0..len as u32).collect(),
        })
    }

    /// Builds the permutation directly from its inverse table:
    /// `source_of[j]` = pre-permutation index landing at position j.
    pub fn from_source_table(seed: u64, source_of: Vec<u32>) -> Result<Self> {
        let len = source_of.len();
        let mut seen = vec![false; len];
        for &s in &source_of {
            let s = s as usize;
            if s >= len || seen[s] {
                return Err(Error::InvalidArgument(
                    "source table is not a permutation".into(),
                ));
            }
            seen[s] = true;
        }
        Ok(HiddenPermutation { seed, source_of })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.source_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source_of.is_empty()
    }

    /// The pre-permutation index whose bit is measured: the one the
    /// permutation sends to the front.
    pub fn measured_index(&self) -> usize {
        self.source_of[0] as usize
    }

    /// The pre-permutation index whose bit lands at position j.
    pub fn source_index(&self, j: usize) -> usize {
        self.source_of[j] as usize
    }

    /// Applies the permutation: output[j] = input[source_of[j]].
    pub fn apply<T: Copy>(&self, input: &[T]) -> Result<Vec<T>> {
        if input.len() != self.source_of.len() {
            return Err(Error::LengthMismatch(input.len(), self.source_of.len()));
        }
        Ok(self.source_of.iter().map(|&s| input[s as usize]).collect())
    }
}

/// A specific qubit: canonical (pre-permutation) bits plus the hidden
/// permutation and the discretisation parameters that generated them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStringState {
    bits: Vec<i8>,
    xi: HiddenPermutation,
    level: usize,
    plus_count: usize,
    rotation: usize,
    basis_tag: String,
}

/// Serialized form: the four integers that determine a state exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitStringStateRepr {
    #[serde(rename = "L")]
    pub level: usize,
    pub m: usize,
    pub n: usize,
    pub xi_seed: u64,
}

/// Outcome of measuring a state: the bit value and the pre-permutation
/// position it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub outcome: i8,
    /// 0-based index into the canonical (pre-permutation) string.
    pub position: usize,
}

/// Canonical block string for (L, m): m bits of +1 followed by L - m of -1.
pub fn block_string(level: usize, plus_count: usize) -> Result<Vec<i8>> {
    if plus_count > level {
        return Err(Error::OutOfRange {
            what: "m",
            got: plus_count,
            limit: level,
        });
    }
    let mut bits = vec![1i8; level];
    bits[plus_count..].fill(-1);
    Ok(bits)
}

/// Rotates the block string of m (+1)s by n positions (phase 2*pi*n/L) and
/// attaches the hidden permutation. Rotation moves every bit n places to
/// the right, wrapping cyclically.
pub fn make_qubit(
    level: DiscretisationLevel,
    plus_count: usize,
    rotation: usize,
    xi: HiddenPermutation,
) -> Result<BitStringState> {
    let l = level.get();
    if plus_count > l {
        return Err(Error::OutOfRange {
            what: "m",
            got: plus_count,
            limit: l,
        });
    }
    if rotation >= l {
        return Err(Error::OutOfRange {
            what: "n",
            got: rotation,
            limit: l - 1,
        });
    }
    if xi.len() != l {
        return Err(Error::LengthMismatch(xi.len(), l));
    }
    let mut bits = block_string(l, plus_count)?;
    bits.rotate_right(rotation);
    Ok(BitStringState {
        bits,
        xi,
        level: l,
        plus_count,
        rotation,
        basis_tag: "computational".to_string(),
    })
}

impl BitStringState {
    /// Canonical bits, before the hidden permutation is applied.
    pub fn bits(&self) -> &[i8] {
        &self.bits
    }

    pub fn permuted_bits(&self) -> Vec<i8> {
        self.xi.apply(&self.bits).expect("lengths match by construction")
    }

    pub fn xi(&self) -> &HiddenPermutation {
        &self.xi
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn plus_count(&self) -> usize {
        self.plus_count
    }

    pub fn rotation(&self) -> usize {
        self.rotation
    }

    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }

    pub fn with_basis_tag(mut self, tag: impl Into<String>) -> Self {
        self.basis_tag = tag.into();
        self
    }

    /// Exact +1 frequency m/L.
    pub fn exact_plus_frequency(&self) -> Rational {
        Rational::new(self.plus_count as i64, self.level as i64)
    }

    pub fn repr(&self) -> BitStringStateRepr {
        BitStringStateRepr {
            level: self.level,
            m: self.plus_count,
            n: self.rotation,
            xi_seed: self.xi.seed(),
        }
    }

    /// Bits as a '1'/'0' string (-1 maps to '0'), canonical order.
    pub fn to_bit_chars(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b > 0 { '1' } else { '0' })
            .collect()
    }
}

impl BitStringStateRepr {
    pub fn build(&self) -> Result<BitStringState> {
        make_qubit(
            DiscretisationLevel::new(self.level)?,
            self.m,
            self.n,
            HiddenPermutation::from_seed(self.xi_seed, self.level)?,
        )
    }
}

/// Reads off the measured bit: the canonical bit the permutation sends to
/// the front. Pure in (bits, xi); repeated calls agree.
pub fn measure(state: &BitStringState) -> MeasurementRecord {
    let position = state.xi.measured_index();
    MeasurementRecord {
        outcome: state.bits[position],
        position,
    }
}

/// Exact Born frequency m/L together with the empirical +1 frequency over
/// `sample_count` independently seeded permutation draws. Seeds are derived
/// from `seed` by counter; the empirical value is an exact count ratio.
pub fn born_frequency(
    level: DiscretisationLevel,
    plus_count: usize,
    rotation: usize,
    sample_count: usize,
    seed: u64,
) -> Result<(Rational, Rational)> {
    if sample_count == 0 {
        return Err(Error::OutOfRange {
            what: "sample_count",
            got: 0,
            limit: usize::MAX,
        });
    }
    let l = level.get();
    if plus_count > l {
        return Err(Error::OutOfRange {
            what: "m",
            got: plus_count,
            limit: l,
        });
    }
    if rotation >= l {
        return Err(Error::OutOfRange {
            what: "n",
            got: rotation,
            limit: l - 1,
        });
    }
    let mut bits = block_string(l, plus_count)?;
    bits.rotate_right(rotation);
    let mut hits = 0usize;
    for k in 0..sample_count {
        let xi = HiddenPermutation::from_seed(derive_seed(seed, k as u64), l)?;
        if bits[xi.measured_index()] > 0 {
            hits += 1;
        }
    }
    Ok((
        Rational::new(plus_count as i64, l as i64),
        Rational::new(hits as i64, sample_count as i64),
    ))
}

/// True iff the two states carry the same multiset of bits, i.e. the same
/// +1 count at equal L.
pub fn equivalent_under_permutation(s1: &BitStringState, s2: &BitStringState) -> Result<bool> {
    if s1.level != s2.level {
        return Err(Error::LengthMismatch(s1.level, s2.level));
    }
    Ok(s1.plus_count == s2.plus_count)
}

/// SplitMix64 step; used to derive independent per-run seeds from a master
/// seed without any shared RNG state.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
