use thiserror::Error;

use crate::rat::Rat;

/// Errors surfaced by the exact-arithmetic kernels and operator builders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Exact Gaussian elimination found rank < size.
    #[error("matrix is singular over the rationals")]
    SingularMatrix,

    /// The annihilating-polynomial precondition of the spectral projectors
    /// failed; the supplied eigenvalue list is wrong for the matrix.
    #[error("matrix is not annihilated by the supplied spectrum")]
    SpectrumMismatch,

    /// A series or Gamma-ratio denominator vanished at the given argument.
    #[error("pole at t = {0}")]
    PoleAtT(Rat),

    /// A coefficient denominator (coordinate difference) vanished.
    #[error("singular parameter point: {0}")]
    SingularPoint(String),

    /// Partition has more parts than the algebra has rows.
    #[error("partition has {parts} parts, exceeds gl_{n}")]
    TooManyParts { parts: usize, n: usize },

    /// Generator or factor index outside the block's ranges.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// Unknown suite or malformed run configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
