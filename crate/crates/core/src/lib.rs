//! Exact-arithmetic simulation of finite-resolution bit-string quantum
//! states: rational and quadratic-surd numerics, Niven-based rationality
//! decision procedures, hidden-permutation measurement, entangled pairs
//! with exact singlet correlations, a seeded Bell-experiment harness, and
//! 2-adic/4-adic shift-map collapse dynamics.

pub mod bitstring;
pub mod entangle;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod harness;
pub mod padic;
pub mod quaternion;

pub use error::{Error, Result};
pub use exact::{
    niven_classify, rational_sqrt, surd_mul, NivenVerdict, QuadraticSurd, Rational, RationalAngle,
};
