use thiserror::Error;

/// Errors raised by the bias toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A prime stream delivered `got` after `previous`.
    #[error("prime stream out of order: {got} after {previous}")]
    Unordered { previous: u64, got: u64 },

    /// An L-value at the central point is numerically zero, so the order of
    /// vanishing (and hence the slope correction) is unknown.
    #[error("central zero detected for {label}: |L(1/2)| = {modulus:e}; vanishing order unknown")]
    CentralZero { label: String, modulus: f64 },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("integer overflow at index {index}")]
    Overflow { index: usize },

    #[error("unsupported discriminant {0}")]
    UnsupportedDiscriminant(i64),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
