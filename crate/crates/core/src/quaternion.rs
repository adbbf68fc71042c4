//! Discretised complex/quaternionic structure: signed permutations acting
//! on length-L strings over {+1, -1}. The three block operators J1, J2, J3
//! square to -1 and multiply in the quaternion cycle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation/negation operator: output[k] = sign[k] * input[target[k]].
/// Rows of the corresponding matrix hold a single entry of +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutationOp {
    #[serde(rename = "L")]
    len: usize,
    /// target[k] = source index read by output position k (0-based).
    #[serde(rename = "perm")]
    target: Vec<usize>,
    #[serde(rename = "sign")]
    sign: Vec<i8>,
}

impl SignedPermutationOp {
    pub fn new(target: Vec<usize>, sign: Vec<i8>) -> Result<Self> {
        let len = target.len();
        if sign.len() != len {
            return Err(Error::LengthMismatch(sign.len(), len));
        }
        let mut seen = vec![false; len];
        for &t in &target {
            if t >= len || seen[t] {
                return Err(Error::InvalidArgument(
                    "target map is not a bijection".into(),
                ));
            }
            seen[t] = true;
        }
        if sign.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        Ok(SignedPermutationOp { len, target, sign })
    }

    pub fn identity(len: usize) -> Self {
        SignedPermutationOp {
            len,
            target: (0..len).collect(),
            sign: vec![1; len],
        }
    }

    /// The global negation -1_L.
    pub fn negation(len: usize) -> Self {
        SignedPermutationOp {
            len,
            target: (0..len).collect(),
            sign: vec![-1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn inverse(&self) -> Self {
        let mut target = vec![0usize; self.len];
        let mut sign = vec![1i8; self.len];
        for k in 0..self.len {
            target[self.target[k]] = k;
            sign[self.target[k]] = self.sign[k];
        }
        SignedPermutationOp {
            len: self.len,
            target,
            sign,
        }
    }
}

/// Applies the operator to a string of +1/-1 bits.
pub fn apply(op: &SignedPermutationOp, s: &[i8]) -> Result<Vec<i8>> {
    if s.len() != op.len {
        return Err(Error::LengthMismatch(s.len(), op.len));
    }
    Ok((0..op.len)
        .map(|k| op.sign[k] * s[op.target[k]])
        .collect())
}

/// Operator product: apply(compose(p, q), s) = apply(p, apply(q, s)).
pub fn compose(p: &SignedPermutationOp, q: &SignedPermutationOp) -> Result<SignedPermutationOp> {
    if p.len != q.len {
        return Err(Error::LengthMismatch(p.len, q.len));
    }
    let mut target = vec![0usize; p.len];
    let mut sign = vec![1i8; p.len];
    for k in 0..p.len {
        target[k] = q.target[p.target[k]];
        sign[k] = p.sign[k] * q.sign[p.target[k]];
    }
    Ok(SignedPermutationOp {
        len: p.len,
        target,
        sign,
    })
}

/// The elementary 2x2 rotation i on the pair (positions base, base+1):
/// out[base] = in[base+1], out[base+1] = -in[base]. Negate for -i.
fn write_i_block(target: &mut [usize], sign: &mut [i8], base: usize, negate: bool) {
    let s: i8 = if negate { -1 } else { 1 };
    target[base] = base + 1;
    sign[base] = s;
    target[base + 1] = base;
    sign[base + 1] = -s;
}

/// The quaternionic operators on length-L strings, 4 | L.
///
/// J1 is i-blocks on the first half and -i-blocks on the second. For 8 | L,
/// J2 and J3 follow the quarter-block pattern
/// J2 = [0, K; -K, 0] with K = diag(1_q, -1_q) and
/// J3 = [0, P; P, 0] with P = diag(I_q, -I_q) (I_q = i-blocks, q = L/4).
/// For L = 4 mod 8 the quarter blocks cannot hold whole i-blocks, so the
/// consistent completion K = 1 and P = i-blocks is used instead; the
/// quaternion relations hold in both regimes.
pub fn build_j(which: u8, len: usize) -> Result<SignedPermutationOp> {
    if !len.is_multiple_of(4) || len == 0 {
        return Err(Error::BadL(len));
    }
    if !(1..=3).contains(&which) {
        return Err(Error::InvalidArgument(format!(
            "operator index {which} must be 1, 2, or 3"
        )));
    }
    let half = len / 2;
    let quarter = len / 4;
    let aligned = len.is_multiple_of(8);
    let mut target = vec![0usize; len];
    let mut sign = vec![1i8; len];
    match which {
        1 => {
            for t in 0..half / 2 {
                write_i_block(&mut target, &mut sign, 2 * t, false);
                write_i_block(&mut target, &mut sign, half + 2 * t, true);
            }
        }
        2 => {
            // top half reads the bottom half through K, bottom reads top through -K
            for k in 0..half {
                let k_sign: i8 = if !aligned || k < quarter { 1 } else { -1 };
                target[k] = half + k;
                sign[k] = k_sign;
                target[half + k] = k;
                sign[half + k] = -k_sign;
            }
        }
        3 => {
            // both halves read across through P
            for t in 0..half / 2 {
                let negate = aligned && 2 * t >= quarter;
                write_i_block(&mut target, &mut sign, 2 * t, negate);
                write_i_block(&mut target, &mut sign, half + 2 * t, negate);
                // cross the half boundary
                target[2 * t] += half;
                target[2 * t + 1] += half;
                target[half + 2 * t] -= half;
                target[half + 2 * t + 1] -= half;
            }
        }
        _ => unreachable!(),
    }
    SignedPermutationOp::new(target, sign)
}

/// Cyclic rotation by n positions as a signed permutation with all signs +1,
/// matching the rotation used by qubit construction (a full cycle of L steps
/// is the identity).
pub fn zeta_power(n: usize, len: usize) -> Result<SignedPermutationOp> {
    if n >= len {
        return Err(Error::OutOfRange {
            what: "n",
            got: n,
            limit: len.saturating_sub(1),
        });
    }
    let target = (0..len).map(|k| (k + len - n) % len).collect();
    SignedPermutationOp::new(target, vec![1; len])
}
