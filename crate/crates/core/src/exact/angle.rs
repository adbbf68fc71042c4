use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// An angle stored as an exact fraction of a full turn, normalized to
/// 0 <= turns < 1. The angle in radians is `turns * 2*pi`; every rationality
/// condition in this crate is a statement about `turns` alone, so pi never
/// appears in stored values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RationalAngle {
    turns: Rational,
}

/// Returns `turns` reduced mod 1 into [0, 1), in lowest terms.
pub fn normalize_angle(turns: &Rational) -> RationalAngle {
    RationalAngle {
        turns: turns.rem_one(),
    }
}

impl RationalAngle {
    pub fn new(turns: Rational) -> Self {
        normalize_angle(&turns)
    }

    pub fn from_turns(numerator: i64, denominator: i64) -> Self {
        Self::new(Rational::new(numerator, denominator))
    }

    /// Degrees are rational exactly when turns are; conversion is exact.
    pub fn from_degrees(degrees: &Rational) -> Self {
        Self::new(degrees * &Rational::new(1, 360))
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero())
    }

    pub fn turns(&self) -> &Rational {
        &self.turns
    }

    pub fn to_degrees(&self) -> Rational {
        &self.turns * &Rational::integer(360)
    }

    /// The angle 2*phi, normalized.
    pub fn doubled(&self) -> Self {
        Self::new(&self.turns + &self.turns)
    }

    pub fn add(&self, other: &Rational) -> Self {
        Self::new(&self.turns + other)
    }

    /// Circular distance to `other`, in turns, in [0, 1/2].
    pub fn circular_distance(&self, other: &Self) -> Rational {
        let d = (&self.turns - &other.turns).rem_one();
        let half = Rational::new(1, 2);
        if d > half {
            &Rational::one() - &d
        } else {
            d
        }
    }

    /// Sign of cos(2*pi*turns): +1, 0, or -1, decided exactly from the
    /// quadrant of the normalized angle.
    pub fn cos_sign(&self) -> i8 {
        let quarter = Rational::new(1, 4);
        let three_quarters = Rational::new(3, 4);
        if self.turns == quarter || self.turns == three_quarters {
            0
        } else if self.turns < quarter || self.turns > three_quarters {
            1
        } else {
            -1
        }
    }

    pub fn to_f64_radians(&self) -> f64 {
        self.turns.to_f64() * std::f64::consts::TAU
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} turn", self.turns)
    }
}

impl FromStr for RationalAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }
}
