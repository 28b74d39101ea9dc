use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("digit {value} on axis {axis} is outside 1..={bound}")]
    InvalidIndex { axis: usize, value: usize, bound: usize },

    #[error("multi-index has {got} digits but the shape has {expected} axes")]
    IndexArity { expected: usize, got: usize },

    #[error("flat index {y} is outside 1..={total}")]
    FlatOutOfRange { y: usize, total: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("normal vectors are parallel; the planes do not meet in a line")]
    DegenerateIntersection,

    #[error("shape total {total} exceeds the enumeration cap {cap}")]
    TooLarge { total: usize, cap: usize },

    #[error("sequence has no nonzero value and cannot be normalized")]
    DegenerateSequence,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid axes: {0}")]
    InvalidAxes(String),

    #[error("invalid logarithm base {0}; must be finite and > 1")]
    InvalidBase(String),

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("invalid coupling: {0}")]
    InvalidCouple(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
