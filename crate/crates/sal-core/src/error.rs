use thiserror::Error;

/// Errors raised by builders, eigensolvers and propagators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SalError {
    #[error("operator is not Hermitian (max |A - A^dag| = {0:e})")]
    NotHermitian(f64),
    #[error("operator is not unitary (max |U^dag U - I| = {0:e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("spectrum changes its degeneracy pattern near s = {0}")]
    LevelCrossing(f64),
    #[error("gauge fixing failed near s = {s}: overlap {overlap:e} below threshold")]
    GaugeFix { s: f64, overlap: f64 },
    #[error("gap vanishes near s = {0}")]
    VanishingGap(f64),
    #[error("grid mismatch between blocks: {0} vs {1}")]
    GridMismatch(String, String),
    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, SalError>;
