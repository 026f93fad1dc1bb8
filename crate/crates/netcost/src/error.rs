//! Error types shared across the toolkit.

use crate::traffic::TrafficClass;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by classification, pricing, dimensioning, and ingestion.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The topology is internally inconsistent or cannot account for a flow.
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    /// A flow record violates its invariants (non-finite timestamp, bad address).
    #[error("invalid flow record: {0}")]
    InvalidFlow(String),

    /// A classification error tied to a specific record of a trace.
    #[error("flow record {index}: {source}")]
    Flow {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Rate bucketing was requested with a non-positive or non-finite width.
    #[error("invalid bucket width: {0}")]
    InvalidBucket(f64),

    /// The trace spans zero time, so no rate can be derived from it.
    #[error("trace span is empty or zero-width; rates are undefined")]
    EmptySpan,

    /// A rate series with no samples was passed where one is required.
    #[error("rate series is empty")]
    EmptySeries,

    /// The peak window is shorter than one bucket or non-finite.
    #[error("invalid peak window: {0}")]
    InvalidWindow(f64),

    /// A traffic class carries bytes but the usage pricing has no rate for it.
    #[error("no usage rate configured for {0} traffic")]
    MissingRate(TrafficClass),

    /// A pricing profile violates its invariants.
    #[error("invalid pricing: {0}")]
    InvalidPricing(String),

    /// A dimensioning policy violates its invariants.
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    /// A window duration was non-positive where a positive one is required.
    #[error("invalid duration: {0}")]
    InvalidDuration(f64),

    /// A pattern-scale fraction fell outside [0, 1].
    #[error("invalid pattern scale: {0} (must be in [0, 1])")]
    InvalidScale(f64),

    /// A traffic pattern violates its invariants.
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    /// The break-even sweep is not monotone over the requested interval.
    #[error("cost difference is not monotone over the sweep interval: {0}")]
    NonMonotone(String),

    /// A text document failed to parse at the given line or row.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A flow CSV row carried a negative byte count.
    #[error("negative byte count at row {row}")]
    NegativeBytes { row: usize },

    /// Fewer than two counter samples were supplied for rate computation.
    #[error("need at least two counter samples, got {0}")]
    InsufficientSamples(usize),

    /// Counter sample timestamps were not strictly increasing.
    #[error("counter timestamps not strictly increasing at index {0}")]
    NonMonotonicTime(usize),

    /// Counter samples were not uniformly spaced, so no bucketed series exists.
    #[error("counter samples not uniformly spaced at index {0}")]
    NonUniformSpacing(usize),

    /// A structured document is missing a field or has the wrong shape.
    #[error("schema error: {0}")]
    Schema(String),

    /// The config document failed to parse or resolve.
    #[error("config error: {0}")]
    Config(String),
}
