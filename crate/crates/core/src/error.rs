use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnaError {
    #[error("invalid interval [{lo}, {hi}): lower must be finite and strictly below upper")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid bounds [{lower}, {upper}]: lower must be finite and strictly below upper")]
    InvalidBounds { lower: f64, upper: f64 },

    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown function `{name}`; available: {}", .available.join(", "))]
    UnknownFunction {
        name: String,
        available: Vec<String>,
    },

    #[error("dimension mismatch: function expects {expected} coordinates, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("shape mismatch: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("cost amplification factor must be at least 1, got {0}")]
    InvalidAmplification(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = AnaError> = std::result::Result<T, E>;
