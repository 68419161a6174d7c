use crate::scalar::DivisionByZero;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    DivisionByZero(#[from] DivisionByZero),
    #[error("grade mismatch: {0}")]
    Grade(String),
    #[error("not computable: {0}")]
    NotComputable(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
