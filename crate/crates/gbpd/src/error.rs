use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..=4")]
    UnsupportedDim(usize),
    #[error("expected {expected} matrix entries, got {got}")]
    WrongEntryCount { expected: usize, got: usize },
    #[error("matrix is not symmetric: relative asymmetry {0:.3e} exceeds 1e-12")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite: pivot {pivot:.6e} at row {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("nonpositive ellipsoid radius: threshold + weight = {0:.6e}")]
    NonpositiveRadius(f64),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("matrix is numerically singular: |det| = {0:.3e}")]
    SingularMatrix(f64),
    #[error("matrix is not orthogonal: max |U\u{1d40}U - I| = {0:.3e} exceeds 1e-10")]
    NotOrthogonal(f64),
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("generator set must not be empty")]
    EmptySet,
    #[error("generator {index} has negative weight {weight}; normalize weights before rendering")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("step-1 threshold must be positive, got {0}")]
    NonpositiveThreshold(f64),
    #[error("invalid flat: {0}")]
    InvalidFlat(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("target {target} is unreachable: {reason}")]
    UnreachableTarget { target: f64, reason: String },
    #[error("image format: {0}")]
    ImageFormat(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
