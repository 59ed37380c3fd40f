use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// A rejected input, located by its path inside the config document.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationError {
    pub path: String,
    pub message: String,
}

impl ValidationError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid input: {0}")]
    Validation(ValidationError),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("grid point {index}: {source}")]
    Engine {
        index: usize,
        #[source]
        source: qudit_zeno::Error,
    },
    #[error(transparent)]
    Core(#[from] qudit_zeno::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl ExperimentError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        ExperimentError::Validation(ValidationError::new(path, message))
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ExperimentError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for bad input, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Validation(_) | ExperimentError::UnknownPreset(_) => 1,
            _ => 3,
        }
    }
}
