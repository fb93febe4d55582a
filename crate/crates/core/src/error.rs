use std::path::PathBuf;

use thiserror::Error;

use crate::network::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{variable}` has no state `{state}`")]
    UnknownState { variable: String, state: String },

    #[error("unknown question `{0}`")]
    UnknownQuestion(String),

    /// The evidence has probability zero under the model.
    #[error("impossible evidence")]
    ImpossibleEvidence,

    #[error("state space of {configurations} configurations exceeds the cap of {cap}")]
    StateSpaceTooLarge { configurations: u128, cap: u128 },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("network failed validation:\n{0}")]
    Invalid(ValidationReport),

    #[error("{path}: {message}")]
    Format { path: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn format(path: impl std::fmt::Display, message: impl Into<String>) -> Self {
        Error::Format { path: path.to_string(), message: message.into() }
    }
}
