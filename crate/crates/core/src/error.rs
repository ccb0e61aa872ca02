use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range for space of size {size}")]
    Range { index: u64, size: u64 },

    /// A probability model produced a lottery that breaks one of its constraints.
    #[error("invalid probability model: {0}")]
    ModelInvalid(String),

    /// A search space is too large to enumerate or materialize.
    #[error("space too large: {what} has size {size}")]
    TooLarge { what: &'static str, size: String },

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
