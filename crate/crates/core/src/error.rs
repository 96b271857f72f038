use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pauli index {0} out of range 0..=3")]
    BadIndex(u8),
    #[error("lattice point ({0},{1}) out of range")]
    BadPoint(u8, u8),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("empty pattern")]
    EmptyPattern,
    #[error("pattern has {0} points, at least 4 required")]
    TooFewPoints(u32),
    #[error("coefficients are not a probability vector: {0}")]
    NotNormalized(String),
    #[error("negative coefficient at index {0}")]
    NegativeCoefficient(usize),
    #[error("duplicate points")]
    DuplicatePoints,
    #[error("not a special quadruple")]
    NotSpecial,
    #[error("point ({0},{1}) is not in the pattern")]
    PointNotInPattern(u8, u8),
    #[error("pattern has no quadruple-free point")]
    NoQuadrupleFreePoint,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
