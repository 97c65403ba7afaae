use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] cubelab_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown conjecture {0:?}; `cubelab list` shows the registry")]
    UnknownConjecture(String),
    #[error("unknown functional {0:?}")]
    UnknownFunctional(String),
    #[error("unknown search space {0:?}")]
    UnknownSpace(String),
    #[error("parameter {name}: {message}")]
    Param { name: String, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn param_error(name: &str, message: impl Into<String>) -> HarnessError {
    HarnessError::Param {
        name: name.to_string(),
        message: message.into(),
    }
}
