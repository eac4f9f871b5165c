//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generator g{level}.{index}: need level >= 1 and 1 <= index <= 2^(level-1)")]
    InvalidGenerator { level: u32, index: u64 },

    #[error("level {level} exceeds the supported maximum {max}")]
    LevelTooLarge { level: u32, max: u32 },

    #[error("invalid window W{n}.{i}: need n >= 1 and 0 <= i <= 2^n")]
    InvalidWindow { n: u32, i: u64 },

    #[error("invalid span: lower endpoint must be strictly below upper endpoint")]
    InvalidSpan,

    #[error("{what} must lie in [0, 1]")]
    OutOfUnitInterval { what: &'static str },

    #[error("word is not reduced")]
    NotReduced,

    #[error("letter level {level} exceeds max level {max_level}")]
    LevelOverflow { level: u32, max_level: u32 },

    #[error("diagram length {expected} does not match word length {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid cancellation diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram lift precondition failed: {0}")]
    LiftPrecondition(String),

    #[error("the identity element is excluded here")]
    IdentityElement,

    #[error("element has nonzero t-exponent")]
    NonzeroTExponent,

    #[error("edge path is not a closed loop at the basepoint")]
    OpenEdgePath,

    #[error("covers are incompatible: {0}")]
    CoverMismatch(String),

    #[error("no element of the coarse cover contains the fine element {0}")]
    NoRefinementTarget(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
