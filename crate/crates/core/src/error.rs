use thiserror::Error;

use crate::quaternion::Quaternion;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero quaternion")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} and {1} are not in the same conjugacy class")]
    NotSimilar(Quaternion, Quaternion),

    #[error("{0} lies in a real conjugacy class; a non-real class is required")]
    RealClass(Quaternion),

    #[error("invalid spherical chain at index {index}: {reason}")]
    InvalidChain { index: usize, reason: String },

    #[error("degenerate chain: |alpha_{index} - conj(alpha_{next})| = {gap:e} is below the guard", next = index + 1)]
    DegenerateChain { index: usize, gap: f64 },

    #[error("matrix is singular to working tolerance")]
    SingularMatrix,

    #[error("right spectra overlap: {0}")]
    SpectraOverlap(String),

    #[error("method `{method}` is not applicable: {reason}")]
    MethodNotApplicable { method: String, reason: String },

    #[error("no solution (largest obstruction {max:e})", max = obstructions.iter().cloned().fold(0.0_f64, f64::max))]
    NoSolution { obstructions: Vec<f64> },

    #[error("singular instance outside the supported two-diagonal chain shape")]
    UnsupportedSingularShape,

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("parameter mu_{index} is {distance:e} away from its plane")]
    InvalidParameter { index: usize, distance: f64 },

    #[error("degree bound violated: {0}")]
    DegreeBound(String),

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
