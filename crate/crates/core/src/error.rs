use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("general position violated: {0}")]
    GeneralPosition(String),

    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),

    #[error("collinear triple at indices ({0}, {1}, {2})")]
    CollinearTriple(usize, usize, usize),

    #[error("LP pivot limit of {0} exceeded")]
    PivotLimit(usize),

    #[error("retry budget of {0} exhausted: {1}")]
    RetriesExhausted(usize, String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("net audit failed: observed gap {gap} >= eps {eps}")]
    AuditFailed { gap: f64, eps: f64 },

    #[error("not orthonormal: Gram deviation {0:e}")]
    NotOrthonormal(f64),

    #[error("extraction failed: {0}")]
    Extraction(String),

    #[error("refutation aborted: {0}")]
    Refutation(String),

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
