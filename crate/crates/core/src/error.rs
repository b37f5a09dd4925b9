use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("exponent {exponent} is not a unit modulo {conductor}")]
    InvalidExponent { exponent: i64, conductor: u32 },
    #[error("invalid conductor {0}")]
    InvalidConductor(u32),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search space of {points} points exceeds the limit of {limit}")]
    SearchTooLarge { points: u128, limit: u128 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
