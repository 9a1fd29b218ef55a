use thiserror::Error;

#[derive(Debug, Error)]
pub enum FinsysError {
    #[error("invalid convex body: {0}")]
    InvalidBody(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("field is not equivariant: residual {residual:.3e} at ({x:.4}, {y:.4})")]
    NotEquivariant { residual: f64, x: f64, y: f64 },
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FinsysError>;
