//! Exact rational and quadratic-surd arithmetic, angle normalization, and
//! the rational-cosine classifier that every other module builds on.

mod angle;
mod niven;
mod rational;
mod surd;

pub use angle::{normalize_angle, RationalAngle};
pub use niven::{niven_classify, NivenVerdict, NIVEN_TURNS};
pub use rational::{rational_sqrt, Rational};
pub use surd::{surd_mul, QuadraticSurd, SQUARE_FREE_BOUND};
