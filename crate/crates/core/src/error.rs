use thiserror::Error;

/// Errors raised while building or measuring finite models.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator index {index} out of range (group has {count} generators)")]
    InvalidGenerator { index: usize, count: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("vertex budget of {budget} exceeded during {stage}")]
    Budget { stage: String, budget: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    #[error("path is not a geodesic: {0}")]
    NotGeodesic(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("truncation: {0}")]
    Truncated(String),

    #[error("no certified data: {0}")]
    Empty(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub fn budget(stage: impl Into<String>, budget: usize) -> Self {
        Error::Budget {
            stage: stage.into(),
            budget,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
