use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is missing, out of range or unknown. `key` is the
    /// dotted path of the offending setting.
    #[error("invalid config `{key}`: {message}")]
    InvalidConfig { key: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Raised by plan construction once every node is dead.
    #[error("all nodes are dead")]
    AllDead,

    #[error("invalid comparison: {0}")]
    InvalidComparison(String),

    /// A round plan disagrees with the node states it is executed against.
    /// Always a bug in the caller.
    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("CSV error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
