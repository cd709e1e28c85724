use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("element is not lopsided")]
    NotLopsided,
    #[error(
        "root finder did not converge after {iterations} iterations (max residual {residual:e})"
    )]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
