use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn pre<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
