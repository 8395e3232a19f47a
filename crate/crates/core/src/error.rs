use thiserror::Error;

use crate::rootsystem::RootType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system type {root_type}{rank}")]
    InvalidType { root_type: RootType, rank: usize },

    #[error("{0:?} is not a positive root of this root system")]
    NotARoot(Vec<i64>),

    /// 2(rho, beta)/(beta, beta) came out non-integral. This can only happen
    /// if the root data itself is inconsistent.
    #[error("weight exponent of {root:?} is {value}, not a positive integer")]
    NonIntegralExponent { root: Vec<i64>, value: String },

    #[error("word {letters:?} is not reduced: {reason}")]
    NotReduced { letters: Vec<usize>, reason: String },

    #[error("word {letters:?} has length {got}, the longest element has length {expected}")]
    NotLongest {
        letters: Vec<usize>,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("factor {factor} ({label}) has no coordinate model; only type A factors are supported")]
    UnsupportedFactor { factor: usize, label: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("vector is not separating: v·m = {value} < 1 for m = {point:?}")]
    InvalidSeparator { point: Vec<i64>, value: String },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
