use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("instance has no demand points")]
    EmptyInstance,

    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("malformed instance document: {0}")]
    Parse(String),

    #[error("angular resolution must lie in (0, pi/4), got {0}")]
    InvalidResolution(f64),

    #[error("event at theta={event} precedes the current interval start {start}")]
    EventOutOfOrder { event: f64, start: f64 },

    #[error("sweep value {model} disagrees with direct evaluation {direct}")]
    InconsistentCost { model: f64, direct: f64 },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
