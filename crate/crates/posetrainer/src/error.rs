use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] posetrainer_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed keypoint data: {0}")]
    Parse(String),
    #[error("frame contains no detected person")]
    EmptyFrame,
    #[error("{}: {message}", path.display())]
    InFile { path: PathBuf, message: String },
    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u64, expected: u64 },
    #[error("pose estimator: {0}")]
    Estimator(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("dataset index is stale: built with feature config {indexed}, current is {current}; rerun train")]
    StaleIndex { indexed: String, current: String },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// Attaches a file path to errors that do not already name one.
    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Error {
        match self {
            e @ (Error::Io { .. } | Error::InFile { .. }) => e,
            other => Error::InFile {
                path: path.into(),
                message: other.to_string(),
            },
        }
    }
}
