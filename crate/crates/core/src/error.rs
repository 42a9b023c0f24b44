use thiserror::Error;

use crate::circuit::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 2..=64")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not northwest-triangular")]
    NotNorthwestTriangular,

    #[error("cut {k} out of range for {n} wires")]
    CutOutOfRange { n: usize, k: usize },

    #[error("invalid gate (target {target}, control {control}) on {n} wires")]
    InvalidGate { n: usize, target: usize, control: usize },

    #[error("circuit is invalid: {0:?}")]
    InvalidCircuit(Vec<Violation>),

    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),

    #[error("invalid box specification: {0}")]
    InvalidBox(&'static str),

    #[error("invalid wire positions: {0}")]
    InvalidPositions(String),

    #[error("invalid range {lo}..={hi} on {n} wires")]
    InvalidRange { n: usize, lo: usize, hi: usize },

    #[error("distance exceeds the depth limit {limit}")]
    DepthLimitExceeded { limit: usize },

    #[error("search over {n} wires refused: {reason}")]
    ResourceRefused { n: usize, reason: String },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
