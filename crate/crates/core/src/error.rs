use thiserror::Error;

use crate::ring::RingSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("cannot parse '{text}' in {ring}: {reason}")]
    ParseScalar {
        text: String,
        ring: RingSpec,
        reason: String,
    },

    #[error("{op}: unsupported over {ring} (a field is required)")]
    UnsupportedRing { op: &'static str, ring: RingSpec },

    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: RingSpec, right: RingSpec },

    #[error("{op}: dimension mismatch {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("index ({i}, {j}) out of range for size {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("degree {t} exceeds the limit {max} for {op}")]
    DegreeTooLarge {
        op: &'static str,
        t: usize,
        max: usize,
    },

    #[error("{op}: empty input")]
    EmptyInput { op: &'static str },

    #[error("characteristic {p} is too small for matrices of size {n} (need p > n)")]
    CharacteristicTooSmall { p: u64, n: usize },

    #[error("field of order {order} is too small for randomized testing at degree {t}")]
    FieldTooSmall { order: u64, t: usize },

    #[error("invalid block shape: {0}")]
    InvalidShape(String),

    #[error("basis element {element} has entry ({row}, {col}) below the block diagonal")]
    NotBlockTriangular {
        element: usize,
        row: usize,
        col: usize,
    },

    #[error("diagonal block {block} is not a full matrix algebra")]
    NotSimpleBlocks { block: usize },

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    ContractViolation(String),
}
