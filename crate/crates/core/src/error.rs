use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value failed validation when constructing or re-checking a domain type.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("dimension mismatch: {left_name} has d={left}, {right_name} has d={right}")]
    DimensionMismatch {
        left_name: String,
        left: usize,
        right_name: String,
        right: usize,
    },

    #[error(
        "sample-count mismatch: {left} vs {right} points; use the subsample-larger alignment \
         (dd_from_pointsets with AlignStrategy::SubsampleLarger) to compare sets of different sizes"
    )]
    Alignment { left: usize, right: usize },

    #[error("n={n} exceeds the dense distance-matrix capacity limit of {limit} points")]
    Capacity { n: usize, limit: usize },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("matrix is not positive semi-definite: eigenvalue {eigenvalue:e} below tolerance {tolerance:e}")]
    NotPsd { eigenvalue: f64, tolerance: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("unknown label {0}")]
    UnknownLabel(u32),

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
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
