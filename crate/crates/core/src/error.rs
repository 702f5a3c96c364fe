use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: BigInt },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("invalid weight data: {0}")]
    InvalidWeights(String),

    #[error("inadmissible automorphism: {0}")]
    Inadmissible(String),

    #[error("matrix is not an isometry of the Euler form")]
    NotIsometry,

    #[error("endomorphism does not preserve the kernel of (rank, degree)")]
    NotGeometric,

    #[error("induced action on (rank, degree) has determinant -1")]
    Orientation,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("growth sum vanished at n = {n}")]
    DegenerateGrowth { n: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    /// An identity that must hold failed; this always signals a bug.
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
