use serde::{Deserialize, Serialize};

use crate::exact::{Rational, RationalAngle};

/// The eight angles (in turns) with rational cosine among all rational
/// multiples of a full turn: 0, 1/6, 1/4, 1/3, 1/2, 2/3, 3/4, 5/6.
/// Every other rational angle has an irrational cosine.
pub const NIVEN_TURNS: [(i64, i64, i64, i64); 8] = [
    // (turn numerator, turn denominator, cos numerator, cos denominator)
    (0, 1, 1, 1),
    (1, 6, 1, 2),
    (1, 4, 0, 1),
    (1, 3, -1, 2),
    (1, 2, -1, 1),
    (2, 3, -1, 2),
    (3, 4, 0, 1),
    (5, 6, 1, 2),
];

/// Outcome of the rational-cosine test for a rational angle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NivenVerdict {
    pub is_rational_cosine: bool,
    /// Present iff the cosine is rational; always one of -1, -1/2, 0, 1/2, 1.
    pub cosine_value: Option<Rational>,
}

/// Decides whether cos(2*pi*angle) is rational, returning the exact value
/// when it is. Table-driven over the eight admissible angles; the turns are
/// normalized and reduced, so numerator/denominator comparison suffices.
pub fn niven_classify(angle: &RationalAngle) -> NivenVerdict {
    if let Some((n, d)) = angle.turns().to_i64_parts() {
        for (tn, td, cn, cd) in NIVEN_TURNS {
            if n == tn && d == td {
                return NivenVerdict {
                    is_rational_cosine: true,
                    cosine_value: Some(Rational::new(cn, cd)),
                };
            }
        }
    }
    NivenVerdict {
        is_rational_cosine: false,
        cosine_value: None,
    }
}
