use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: expected {expected} bytes, found {found}")]
    SizeMismatch {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("unknown dtype {0:?} (expected u8, u16 or f32)")]
    UnknownDtype(String),

    #[error("unsupported byte order {0:?} (only \"little\" is supported)")]
    UnsupportedByteOrder(String),

    #[error("non-finite value in band {band} at pixel {index}")]
    NonFinite { band: usize, index: usize },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("invalid raster: {0}")]
    InvalidRaster(String),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("segments {0} and {1} are not adjacent")]
    NotAdjacent(u32, u32),

    #[error("segmentation did not converge within {0} passes")]
    NonConvergence(usize),

    #[error("inconsistent segmentation: {0}")]
    Inconsistent(String),

    #[error("invalid rule set: {0}")]
    InvalidRules(String),

    #[error("unknown feature {0:?}")]
    UnknownFeature(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("nothing to export: {0}")]
    Empty(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
