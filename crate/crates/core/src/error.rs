use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("instance seed {seed} not supported for {problem} (allowed: {allowed})")]
    UnsupportedSeed {
        problem: String,
        seed: u64,
        allowed: &'static str,
    },
    #[error("dimension {dim} not supported for {problem}")]
    UnsupportedDimension { problem: String, dim: usize },
    #[error("point violates the search box at coordinate {index} (value {value}, box [{lower}, {upper}])")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("segments have different heights ({0} vs {1})")]
    HeightMismatch(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("walk direction has zero length")]
    DegenerateDirection,
    #[error("walk anchor lies outside the search box")]
    AnchorOutOfBounds,
    #[error("walk step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("bad sample size {n}: {reason}")]
    BadSampleSize { n: usize, reason: String },
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("all sampled fitness values are equal")]
    AllEqualFitness,
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("feature manifest mismatch: {0}")]
    ManifestMismatch(String),
    #[error("need at least {needed} groups, got {got}")]
    TooFewGroups { needed: usize, got: usize },
    #[error("perplexity {perplexity} too large for {rows} rows")]
    PerplexityTooLarge { perplexity: f64, rows: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("KL trace was not recorded for this run")]
    TraceDisabled,
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("label `{label}` is not in the vocabulary of {property}")]
    UnknownLabel { property: String, label: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
