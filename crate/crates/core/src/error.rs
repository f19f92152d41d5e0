use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected an even-length spectrum, got length {0}")]
    OddLength(usize),

    #[error("values are not in descending order at position {0}")]
    NotDescending(usize),

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("matrix is not orthogonal (max deviation {0:e})")]
    NotOrthogonal(f64),

    #[error("rotation has determinant {0}, expected +1")]
    NotSpecial(f64),

    #[error("center of mass is not at the origin (offset {0:e})")]
    CenterOfMass(f64),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("rank {r} exceeds ambient size {p}")]
    RankTooLarge { r: usize, p: usize },

    #[error("partition does not split the spectrum: {0}")]
    InvalidPartition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Raised when a quantity that must hold by construction does not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
