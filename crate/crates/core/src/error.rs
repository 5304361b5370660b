use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("jet order {order} exceeds the order cap {cap}")]
    OrderOverflow { order: usize, cap: usize },

    #[error("index out of range: {0}")]
    Range(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("[δ, δ] does not vanish on the probe family")]
    DeltaNotSquareZero,

    #[error("[[P, P]] does not vanish")]
    PoissonCheckFailed,

    #[error("form is not horizontal: {0}")]
    NotHorizontal(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
