use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GraphError {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        GraphError::Parameter(msg.into())
    }
}
