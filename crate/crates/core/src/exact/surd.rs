use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{rational_sqrt, Rational};

/// Trial-division bound for extracting square factors from a radicand.
/// Desk-scale radicands are tiny; anything past this is rejected rather
/// than silently left unnormalized.
pub const SQUARE_FREE_BOUND: u64 = 1_000_000;

/// Exact number of the form `a + b*sqrt(d)` with rational a, b and
/// square-free natural d. The value is rational iff b = 0 (and then d = 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSurd {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadraticSurd {
    /// Builds `a + b*sqrt(d)`, extracting square factors of d into b and
    /// folding sqrt(1) (or b = 0) into the rational part.
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("radicand must be >= 1".into()));
        }
        let (square_root, free) = split_square_factor(d)?;
        let b = &b * &Rational::integer(square_root as i64);
        if free == 1 {
            return Ok(QuadraticSurd {
                a: &a + &b,
                b: Rational::zero(),
                d: 1,
            });
        }
        if b.is_zero() {
            return Ok(QuadraticSurd {
                a,
                b,
                d: 1,
            });
        }
        Ok(QuadraticSurd { a, b, d: free })
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadraticSurd {
            a,
            b: Rational::zero(),
            d: 1,
        }
    }

    /// The exact square root of a non-negative rational, as a surd.
    /// `r = p/q` becomes `(1/q) * sqrt(p*q)` before square-free reduction.
    pub fn sqrt_of(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeInput(r.to_string()));
        }
        if let Some(exact) = rational_sqrt(r)? {
            return Ok(Self::from_rational(exact));
        }
        let num = r
            .numerator()
            .to_u64()
            .ok_or(Error::RadicandTooLarge(u64::MAX, SQUARE_FREE_BOUND * SQUARE_FREE_BOUND))?;
        let den = r
            .denominator()
            .to_u64()
            .ok_or(Error::RadicandTooLarge(u64::MAX, SQUARE_FREE_BOUND * SQUARE_FREE_BOUND))?;
        let radicand = num
            .checked_mul(den)
            .ok_or(Error::RadicandTooLarge(num, SQUARE_FREE_BOUND * SQUARE_FREE_BOUND))?;
        Self::new(
            Rational::zero(),
            Rational::new(1, den as i64),
            radicand,
        )
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value when b = 0.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// Exact product. Both operands must share a radicand unless one of them is
/// rational.
pub fn surd_mul(x: &QuadraticSurd, y: &QuadraticSurd) -> Result<QuadraticSurd> {
    let d = match (x.is_rational(), y.is_rational()) {
        (true, _) => y.d,
        (_, true) => x.d,
        _ if x.d == y.d => x.d,
        _ => return Err(Error::MixedRadicands(x.d, y.d)),
    };
    // (a1 + b1 sqrt d)(a2 + b2 sqrt d) = a1 a2 + b1 b2 d + (a1 b2 + a2 b1) sqrt d
    let a = &(&x.a * &y.a) + &(&(&x.b * &y.b) * &Rational::integer(d as i64));
    let b = &(&x.a * &y.b) + &(&y.a * &x.b);
    QuadraticSurd::new(a, b, d)
}

/// Splits n into (s, f) with n = s^2 * f and f square-free, by trial
/// division up to `SQUARE_FREE_BOUND`.
fn split_square_factor(n: u64) -> Result<(u64, u64)> {
    let mut remaining = n;
    let mut square_root = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= remaining {
        if p > SQUARE_FREE_BOUND {
            return Err(Error::RadicandTooLarge(n, SQUARE_FREE_BOUND));
        }
        if remaining.is_multiple_of(p) {
            let mut count = 0u32;
            while remaining.is_multiple_of(p) {
                remaining /= p;
                count += 1;
            }
            square_root *= p.pow(count / 2);
            if count % 2 == 1 {
                free *= p;
            }
        }
        p += 1;
    }
    // remaining is now 1 or a prime
    if remaining > 1 {
        if remaining > SQUARE_FREE_BOUND {
            return Err(Error::RadicandTooLarge(n, SQUARE_FREE_BOUND));
        }
        free *= remaining;
    }
    Ok((square_root, free))
}
