//! Two-qubit states as correlated length-L bit-string pairs sharing one
//! hidden permutation. The singlet construction reproduces the exact
//! correlation -cos(theta) and the bit-string form of EPR/Bell locality:
//! one party's string never changes when the other party's setting does.

use serde::{Deserialize, Serialize};

use crate::bitstring::{block_string, HiddenPermutation};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// The six (m, n) parameters of a general two-qubit state: whole-string
/// amplitude/phase for the first qubit, then one pair per sub-block of the
/// second qubit.
pub type PairParams = [(usize, usize); 3];

/// Two correlated length-L strings under a single shared permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntangledPair {
    alice_bits: Vec<i8>,
    bob_bits: Vec<i8>,
    xi: HiddenPermutation,
    params: PairParams,
}

impl EntangledPair {
    /// General construction: Alice holds the rotated block string for
    /// (m1, n1); Bob's string carries m2 of +1 within the first m1 positions
    /// and m3 of +1 within the rest, each sub-block cyclically rotated by its
    /// own phase.
    pub fn new(
        level: usize,
        params: PairParams,
        xi: HiddenPermutation,
    ) -> Result<Self> {
        let [(m1, n1), (m2, n2), (m3, n3)] = params;
        if xi.len() != level {
            return Err(Error::LengthMismatch(xi.len(), level));
        }
        if m1 > level {
            return Err(Error::OutOfRange { what: "m1", got: m1, limit: level });
        }
        let second = level - m1;
        if m2 > m1 {
            return Err(Error::OutOfRange { what: "m2", got: m2, limit: m1 });
        }
        if m3 > second {
            return Err(Error::OutOfRange { what: "m3", got: m3, limit: second });
        }
        if n1 >= level.max(1) {
            return Err(Error::OutOfRange { what: "n1", got: n1, limit: level - 1 });
        }
        if m1 > 0 && n1 == 0 && n2 >= m1 {
            return Err(Error::OutOfRange { what: "n2", got: n2, limit: m1 - 1 });
        }
        if second > 0 && n3 >= second.max(1) {
            return Err(Error::OutOfRange { what: "n3", got: n3, limit: second - 1 });
        }
        let mut alice = block_string(level, m1)?;
        alice.rotate_right(n1);
        let mut first_block = block_string(m1, m2)?;
        first_block.rotate_right(n2.min(m1.saturating_sub(1)));
        let mut second_block = block_string(second, m3)?;
        second_block.rotate_right(n3.min(second.saturating_sub(1)));
        first_block.extend_from_slice(&second_block);
        Ok(EntangledPair {
            alice_bits: alice,
            bob_bits: first_block,
            xi,
            params,
        })
    }

    pub fn level(&self) -> usize {
        self.alice_bits.len()
    }

    /// Canonical (pre-permutation) strings.
    pub fn alice_bits(&self) -> &[i8] {
        &self.alice_bits
    }

    pub fn bob_bits(&self) -> &[i8] {
        &self.bob_bits
    }

    pub fn xi(&self) -> &HiddenPermutation {
        &self.xi
    }

    pub fn params(&self) -> &PairParams {
        &self.params
    }

    pub fn permuted(&self) -> (Vec<i8>, Vec<i8>) {
        (
            self.xi.apply(&self.alice_bits).expect("lengths agree"),
            self.xi.apply(&self.bob_bits).expect("lengths agree"),
        )
    }
}

/// A singlet: Alice's string is the half-and-half block; within her +1 block
/// Bob carries a sin^2(theta/2) fraction of +1, within her -1 block a
/// cos^2(theta/2) fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletPair {
    base: EntangledPair,
    cos_theta: Rational,
}

/// Serialized description of a singlet run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletRepr {
    #[serde(rename = "L")]
    pub level: usize,
    pub cos_theta: Rational,
    pub xi_seed: u64,
}

/// Report produced by the counterfactual swaps: the unchanged party's string
/// and outcome must be bit-identical across the setting change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub string_unchanged: bool,
    pub outcome_unchanged: bool,
}

/// Number of +1 bits Bob carries inside Alice's +1 block: L(1-cos)/4, which
/// must be a whole number for the setting to exist at this L.
fn singlet_block_counts(level: usize, cos_theta: &Rational) -> Result<(usize, usize)> {
    if cos_theta.abs() > Rational::one() {
        return Err(Error::DomainError {
            what: "cos_theta",
            got: cos_theta.to_string(),
        });
    }
    if !level.is_multiple_of(2) {
        return Err(Error::GridIncompatible(cos_theta.to_string(), level));
    }
    let l = Rational::integer(level as i64);
    let quarter = Rational::new(1, 4);
    let k1 = &(&l * &(&Rational::one() - cos_theta)) * &quarter;
    let k2 = &(&l * &(&Rational::one() + cos_theta)) * &quarter;
    if !k1.is_integer() || !k2.is_integer() {
        return Err(Error::GridIncompatible(cos_theta.to_string(), level));
    }
    let k1 = k1.to_i64_parts().expect("bounded by L").0 as usize;
    let k2 = k2.to_i64_parts().expect("bounded by L").0 as usize;
    Ok((k1, k2))
}

/// True iff `cos_theta` is representable as a singlet setting at this L.
pub fn grid_compatible(level: usize, cos_theta: &Rational) -> bool {
    singlet_block_counts(level, cos_theta).is_ok()
}

/// Builds the singlet in canonical block form, then records the shared
/// permutation. Non-integral block sizes are an error, not a rounding:
/// snapping nominal settings to the grid is the harness's job.
pub fn make_singlet(
    level: usize,
    cos_theta: &Rational,
    xi: HiddenPermutation,
) -> Result<SingletPair> {
    let (k1, k2) = singlet_block_counts(level, cos_theta)?;
    let half = level / 2;
    let base = EntangledPair::new(level, [(half, 0), (k1, 0), (k2, 0)], xi)?;
    Ok(SingletPair {
        base,
        cos_theta: cos_theta.clone(),
    })
}

impl SingletRepr {
    pub fn build(&self) -> Result<SingletPair> {
        make_singlet(
            self.level,
            &self.cos_theta,
            HiddenPermutation::from_seed(self.xi_seed, self.level)?,
        )
    }
}

impl SingletPair {
    pub fn base(&self) -> &EntangledPair {
        &self.base
    }

    pub fn cos_theta(&self) -> &Rational {
        &self.cos_theta
    }

    pub fn level(&self) -> usize {
        self.base.level()
    }

    pub fn xi(&self) -> &HiddenPermutation {
        self.base.xi()
    }

    pub fn repr(&self) -> SingletRepr {
        SingletRepr {
            level: self.level(),
            cos_theta: self.cos_theta.clone(),
            xi_seed: self.base.xi().seed(),
        }
    }

    /// The pair rewritten with the roles of the two layouts exchanged: the
    /// first string takes the two-block form and the second the half block,
    /// under a permutation chosen so the permuted string pair is identical
    /// to this one's. The measured pair of bits is unchanged.
    pub fn exchanged_representation(&self) -> EntangledPair {
        let level = self.level();
        let half = level / 2;
        let (k1, k2) = (self.base.params[1].0, self.base.params[2].0);
        // canonical layouts with roles swapped
        let alice_new = self.base.bob_bits.clone();
        let bob_new = self.base.alice_bits.clone();

        // positions of each (first, second) bit-pair class in the swapped
        // layout, consumed in increasing order
        let mut buckets: [Vec<u32>; 4] = Default::default();
        for (pos, (&a, &b)) in alice_new.iter().zip(&bob_new).enumerate() {
            buckets[class_index(a, b)].push(pos as u32);
        }
        let mut next = [0usize; 4];
        let mut source_of = Vec::with_capacity(level);
        for j in 0..level {
            let s = self.base.xi().source_index(j);
            let class = class_index(self.base.alice_bits[s], self.base.bob_bits[s]);
            let bucket = &buckets[class];
            let s_new = bucket[next[class]];
            next[class] += 1;
            source_of.push(s_new);
        }
        let xi_prime = HiddenPermutation::from_source_table(self.base.xi().seed(), source_of)
            .expect("bucket matching yields a permutation");
        EntangledPair {
            alice_bits: alice_new,
            bob_bits: bob_new,
            xi: xi_prime,
            params: [(half, 0), (k1, 0), (k2, 0)],
        }
    }
}

fn class_index(a: i8, b: i8) -> usize {
    (usize::from(a > 0) << 1) | usize::from(b > 0)
}

/// The measured pair: both canonical strings read at the position the shared
/// permutation sends to the front. Deterministic per permutation.
pub fn joint_measure(pair: &EntangledPair) -> (i8, i8) {
    let m = pair.xi.measured_index();
    (pair.alice_bits[m], pair.bob_bits[m])
}

/// (1/L) * sum over positions of alice_i * bob_i, exact. For a singlet this
/// equals -cos(theta) with zero tolerance.
pub fn exact_correlation(pair: &EntangledPair) -> Rational {
    let sum: i64 = pair
        .alice_bits
        .iter()
        .zip(&pair.bob_bits)
        .map(|(&a, &b)| (a * b) as i64)
        .sum();
    Rational::new(sum, pair.level() as i64)
}

/// Rebuilds Bob's string for a new setting while Alice's string stays
/// bit-identical, and reports that her string and outcome are unchanged.
pub fn bob_counterfactual_swap(
    pair: &SingletPair,
    new_cos: &Rational,
) -> Result<(SingletPair, LocalityReport)> {
    let rebuilt = make_singlet(pair.level(), new_cos, pair.base.xi.clone())?;
    let report = LocalityReport {
        string_unchanged: rebuilt.base.alice_bits == pair.base.alice_bits,
        outcome_unchanged: joint_measure(&rebuilt.base).0 == joint_measure(&pair.base).0,
    };
    Ok((rebuilt, report))
}

/// Alice-side setting change through the exchanged representation: her
/// two-block string is rebuilt for the new setting while Bob's string and
/// outcome are untouched.
pub fn alice_counterfactual_swap(
    pair: &SingletPair,
    new_cos: &Rational,
) -> Result<(EntangledPair, LocalityReport)> {
    let exchanged = pair.exchanged_representation();
    let (k1, k2) = singlet_block_counts(pair.level(), new_cos)?;
    let half = pair.level() / 2;
    let mut first = block_string(half, k1)?;
    let second = block_string(pair.level() - half, k2)?;
    first.extend_from_slice(&second);
    let old_bob_outcome = joint_measure(&exchanged).1;
    let rebuilt = EntangledPair {
        alice_bits: first,
        bob_bits: exchanged.bob_bits.clone(),
        xi: exchanged.xi.clone(),
        params: [(half, 0), (k1, 0), (k2, 0)],
    };
    let report = LocalityReport {
        string_unchanged: rebuilt.bob_bits == exchanged.bob_bits,
        outcome_unchanged: joint_measure(&rebuilt).1 == old_bob_outcome,
    };
    Ok((rebuilt, report))
}
