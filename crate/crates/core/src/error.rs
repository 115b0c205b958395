//! Error type shared by all library modules.

/// Errors produced by construction, evaluation, and inversion routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested mass level exceeds the peak of the shifted CDF, so the
    /// norm inverse has an empty feasible set. Callers map this to a zero
    /// shrunk radius.
    #[error("partition vanishes: level {level} exceeds peak mass {peak}")]
    PartitionVanishes { level: f64, peak: f64 },

    #[error("exact evaluation unsupported: {0}")]
    ExactUnsupported(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("interference distance undefined: need at least two balls")]
    UndefinedInterference,

    #[error("empty test set")]
    EmptyTestSet,

    #[error("overlapping regions: {0}")]
    OverlappingRegions(String),
}

pub type Result<T> = std::result::Result<T, Error>;
