use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmaError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("specialization error: {0}")]
    Specialization(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
}

pub type Result<T> = std::result::Result<T, QmaError>;
