use thiserror::Error;

/// Errors raised by the walk toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("lattice side must be at least 2, got {0}")]
    InvalidSide(usize),

    #[error("vertex ({x}, {y}) is outside a lattice of side {side}")]
    OutOfRange { x: usize, y: usize, side: usize },

    #[error("geometry mismatch: side {left} vs side {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, WalkError>;
