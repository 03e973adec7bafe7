use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported dimension d = {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("representation not in triangular normal form: {0}")]
    NotNormalForm(String),
    #[error("leading linear forms are dependent (rank {rank} < {expected})")]
    DependentForms { rank: usize, expected: usize },
    #[error("degenerate field: b = 0 has no rotation normal form")]
    DegenerateField,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
