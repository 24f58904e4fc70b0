/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar argument is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Structured input (matrix, starting point, ...) violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An iterative solver detected sustained objective growth.
    #[error("solver diverged: {0}")]
    Divergence(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
