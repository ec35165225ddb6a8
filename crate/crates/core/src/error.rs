//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Basis indices are 1-based; index 0 is never valid.
    #[error("invalid basis index 0 (indices are 1-based)")]
    InvalidIndex,

    #[error("vector support reaches index {support_max}, engine `{engine}` is bounded by {bound}")]
    DimensionExceeded {
        engine: String,
        support_max: u32,
        bound: u32,
    },

    #[error("k-subsets have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },

    #[error("family is ragged: tuple {index} has length {len}, expected {expected}")]
    RaggedFamily {
        index: usize,
        len: usize,
        expected: usize,
    },

    #[error("ground set of size {ground} cannot host k-subsets with k = {k}")]
    GroundTooSmall { ground: usize, k: usize },

    #[error("map needs at least two domain points, found {found}")]
    DomainTooSmall { found: usize },

    #[error("no pair realizes distance >= {threshold}")]
    NoQualifyingPairs { threshold: String },

    #[error("ground set has no interlaced pairs")]
    NoInterlacedPairs,

    #[error("resource guard: {0}")]
    ResourceLimit(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("cache file format-version {found} is not supported (expected {expected})")]
    VersionMismatch { found: String, expected: String },

    #[error("cache file checksum mismatch: header {expected}, computed {computed}")]
    ChecksumMismatch { expected: String, computed: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
