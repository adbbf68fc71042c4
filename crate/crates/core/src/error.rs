use thiserror::Error;

/// Errors shared across the exact-arithmetic and simulation modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot multiply surds with different radicands ({0} and {1})")]
    MixedRadicands(u64, u64),

    #[error("square root of a negative rational: {0}")]
    NegativeInput(String),

    #[error("radicand {0} exceeds the square-free factorization bound {1}")]
    RadicandTooLarge(u64, u64),

    #[error("{what} = {got} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("L = {0} must be divisible by 4 for quaternionic operators")]
    BadL(usize),

    #[error("cos theta = {0} is not representable on the L = {1} grid")]
    GridIncompatible(String, usize),

    #[error("no grid-compatible cosine within the nominal tolerance window")]
    NoCompatibleSetting,

    #[error("|{what}| = {got} exceeds 1")]
    DomainError { what: &'static str, got: String },

    #[error("p-adic base mismatch: {0} vs {1}")]
    BaseMismatch(u8, u8),

    #[error("invalid rational literal: {0:?}")]
    ParseRational(String),

    #[error("run {run_id} failed: {source}")]
    RunFailed {
        run_id: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid digit {digit} for base {base}")]
    BadDigit { digit: u8, base: u8 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
