use thiserror::Error;

/// Errors raised by the enclosure engine, the data loaders and the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("region mismatch: {0}")]
    Region(String),

    #[error("grid misaligned: {0}")]
    Misaligned(String),

    #[error("matrix data: {0}")]
    Matrix(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
