use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] detlab_core::Error),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid value for {flag}: {message}")]
    Usage { flag: String, message: String },

    #[error("campaign is invalid:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    #[error("report does not match its schema: {0}")]
    Schema(String),
}

pub type LabResult<T> = Result<T, LabError>;
