use thiserror::Error;

/// Errors produced by state construction, distance evaluation and transport solves.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("zero state vector")]
    ZeroVector,

    #[error("invalid spin: {0}")]
    InvalidSpin(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("unknown state descriptor: {0}")]
    UnknownState(String),

    #[error("eigensolver did not converge")]
    EigenFailure,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("Husimi field is not rotationally symmetric about z (variation {0:.3e})")]
    NotSymmetric(f64),

    #[error("meridian-reduction assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("infeasible transport problem: {0}")]
    Infeasible(String),

    #[error("simplex pivot cap of {0} exceeded")]
    IterationCap(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
