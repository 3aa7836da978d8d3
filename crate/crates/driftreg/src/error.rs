use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: row {row}, column {column:?}: cannot parse {value:?} as a number", file.display())]
    Parse {
        file: PathBuf,
        row: usize,
        column: String,
        value: String,
    },
    #[error("{}: {message}", file.display())]
    Malformed { file: PathBuf, message: String },
    #[error("{}: expected column {column:?} is missing", file.display())]
    SchemaMismatch { file: PathBuf, column: String },
    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),
    #[error("dataset {dataset} has no target {target:?}")]
    UnknownTarget { dataset: String, target: String },
    #[error("need more than {working_points} records, dataset has {records}")]
    InsufficientData { records: usize, working_points: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("trace is empty")]
    EmptyTrace,
    #[error("result carries no trace")]
    MissingTrace,
    #[error("download of {url} failed: {message}")]
    Download { url: String, message: String },
    #[error("checksum mismatch for {}: expected {expected}, got {actual}", file.display())]
    Checksum {
        file: PathBuf,
        expected: String,
        actual: String,
    },
    #[error(transparent)]
    Engine(#[from] driftreg_core::Error),
    #[error("{label}: {source}")]
    Experiment {
        label: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path)
        } else {
            Error::Io { path, source }
        }
    }

    /// Wraps an error with the label of the experiment it came from.
    pub fn in_experiment(self, label: &str) -> Self {
        Error::Experiment {
            label: label.to_owned(),
            source: Box::new(self),
        }
    }

    /// The innermost error, looking through experiment labels.
    pub fn root(&self) -> &Error {
        match self {
            Error::Experiment { source, .. } => source.root(),
            other => other,
        }
    }
}
