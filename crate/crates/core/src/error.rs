use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("table is not a group: {0}")]
    GroupAxiom(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("outside the supported scope: {0}")]
    Scope(String),
    #[error("unsupported order {0}: the catalog covers orders up to 15")]
    UnsupportedOrder(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
