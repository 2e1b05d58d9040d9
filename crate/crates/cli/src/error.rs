use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A parameter failed validation; `key` is the flag or config key.
    #[error("invalid value for `{key}`: {message}")]
    Param { key: String, message: String },

    #[error("unknown key `{key}` for {kind}")]
    UnknownKey { key: String, kind: String },

    #[error("config file {path}, line {line}: {message}")]
    Config { path: String, line: usize, message: String },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("{0}")]
    Core(chebias_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("resume state: {0}")]
    Resume(String),
}

impl From<chebias_core::Error> for CliError {
    fn from(e: chebias_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn param(key: &str, message: impl Into<String>) -> Self {
        CliError::Param {
            key: key.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code: 2 for bad input, 3 for an uncertified central
    /// value, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param { .. }
            | CliError::UnknownKey { .. }
            | CliError::Config { .. }
            | CliError::UnknownCheck(_) => 2,
            CliError::Core(chebias_core::Error::CentralZero { .. }) => 3,
            CliError::Core(chebias_core::Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }

    /// Extra context printed after the error line.
    pub fn explanation(&self) -> Option<&'static str> {
        match self {
            CliError::Core(chebias_core::Error::CentralZero { .. }) => Some(
                "the predicted slope depends on the order of vanishing at the central point, which a numerical \
                 zero cannot certify; no series was written",
            ),
            _ => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
