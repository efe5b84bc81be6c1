//! Error type shared across the pipeline stages.

use thiserror::Error;

/// Errors produced anywhere in the Mapper pipeline.
///
/// Configuration errors are distinguished from runtime errors so the CLI can
/// map them to different exit codes. A configuration error means the inputs
/// could never work (bad axis, k larger than a fiber, malformed spec); a
/// runtime error means the environment failed (I/O, serialization).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}{}", ctx_suffix(.context))]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    #[error("{path}: row {row}: {message}")]
    CsvParse {
        path: String,
        row: usize,
        message: String,
    },

    #[error("lens axis {axis} out of range for dataset of dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("overlap_frac must lie in [0, 1), got {0}")]
    InvalidOverlap(f64),

    #[error("n_intervals must be >= 1 on every axis")]
    InvalidIntervalCount,

    #[error("cosine distance undefined for zero vector (point index {index})")]
    ZeroVectorCosine { index: usize },

    #[error("k-means k={k} exceeds available points ({points}){}", ctx_suffix(.fiber))]
    KTooLarge {
        k: usize,
        points: usize,
        fiber: String,
    },

    #[error("silhouette score undefined for {clusters} cluster(s); need at least 2")]
    UndefinedSilhouette { clusters: usize },

    #[error("invalid clusterer parameter: {0}")]
    InvalidClustererParam(String),

    #[error("unknown clusterer '{0}'; known: {1}")]
    UnknownClusterer(String, String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("lens values row count {got} does not match dataset size {expected}")]
    LensLengthMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn ctx_suffix(ctx: &str) -> String {
    if ctx.is_empty() {
        String::new()
    } else {
        format!(" ({ctx})")
    }
}

impl Error {
    /// True for errors caused by the supplied configuration rather than the
    /// environment; the CLI maps these to exit code 1, the rest to 2.
    pub fn is_config(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
