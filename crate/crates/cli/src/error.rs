use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("matrix {index} in {path} fails certification: {source}")]
    Certification {
        path: PathBuf,
        index: usize,
        source: logmaj::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] logmaj::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;
