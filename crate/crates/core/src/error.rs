use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// An argument violated its type bounds (non-finite, out of range).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operation is undefined for the given input (empty sample,
    /// zero criterion, zero mean, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A single input record could not be interpreted.
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
