use thiserror::Error;

use crate::moebius::IsometryClass;

/// Errors raised by the geometric primitives and the higher level scans.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate matrix (determinant {0:e})")]
    DegenerateMatrix(f64),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid geodesic line: {0}")]
    InvalidLine(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("isometry is {0:?}, expected a hyperbolic element")]
    NotHyperbolic(IsometryClass),
    #[error("lines intersect or share an endpoint")]
    LinesNotDisjoint,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("word length {requested} exceeds cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("ball enumeration exceeded {0} elements")]
    TooManyElements(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("degenerate point configuration: points {0:?} are cocircular")]
    Degenerate([usize; 4]),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
