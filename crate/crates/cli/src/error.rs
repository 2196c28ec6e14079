use thiserror::Error;

/// Everything that aborts a command before a verdict exists. All of these
/// map to exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },

    #[error("{location}: {field}: {message}")]
    Invalid { location: String, field: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] quncert::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }
}
