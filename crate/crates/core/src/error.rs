use thiserror::Error;

/// Errors raised by the tropmod library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not connected")]
    NotConnected,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("edge {0} not present")]
    EdgeNotFound(usize),
    #[error("genus {genus} out of range {min}..={max}")]
    GenusOutOfRange { genus: usize, min: usize, max: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("definite only; reduce along the nullspace first")]
    NotDefinite,
    #[error("increase window")]
    WindowTooSmall,
    #[error("not a simplicial cone")]
    NotSimplicial,
    #[error("not an isomorphism")]
    NotAnIsomorphism,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("use structural check")]
    UseStructuralCheck,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("overlap ({i}, {j}, {subset:?}) has no GL_g(Z) witness")]
    OverlapFailed { i: usize, j: usize, subset: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
