use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by every layer of the lab.
#[derive(Debug, Error)]
pub enum LabError {
    /// Invalid configuration detected before any work is done.
    #[error("configuration error: {0}")]
    Config(String),

    /// A requested computation exceeds an enumeration or pairing cap.
    #[error("capacity exceeded: {what} needs {needed}, cap {cap} ({cap_name})")]
    Capacity {
        what: String,
        needed: u128,
        cap: u128,
        cap_name: &'static str,
    },

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A time that is not on the sampled grid.
    #[error("time {0} is not a grid point")]
    Lookup(f64),

    /// An operation applied to the wrong matrix family.
    #[error("kind error: {0}")]
    Kind(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors the CLI maps to exit status 2.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            LabError::Config(_)
                | LabError::Capacity { .. }
                | LabError::Domain(_)
                | LabError::Lookup(_)
                | LabError::Kind(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
