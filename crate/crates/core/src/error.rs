use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("expected {expected} representation, found {found}")]
    Representation {
        expected: &'static str,
        found: &'static str,
    },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("block {0:?} is outside the covered block range")]
    BlockOutOfRange([i64; 2]),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("iterate blow-up at order {order}: {detail}")]
    BlowUp { order: usize, detail: String },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("malformed field dump: {0}")]
    Dump(String),
    #[error("malformed tree encoding at byte {pos}: {msg}")]
    TreeEncoding { pos: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
