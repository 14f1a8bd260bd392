//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed record: {reason}")]
    MalformedRecord {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("duplicate record id {id:?}")]
    DuplicateId { id: String },

    #[error("quality bounds invalid: min {min} > max {max}")]
    QualityBounds { min: f64, max: f64 },

    #[error("sample size {n} exceeds corpus size {available}")]
    SampleTooLarge { n: usize, available: usize },

    #[error("no template for ({setting}, {stage})")]
    UnknownTemplate { setting: String, stage: String },

    #[error("prompt library invalid: {0}")]
    PromptLibrary(String),

    #[error("record {id:?} has empty text")]
    EmptyRecordText { id: String },

    #[error("teacher profile {0:?} is not configured")]
    ProfileNotConfigured(String),

    #[error("no fixture for request hash {hash} under {dir}")]
    FixtureMissing { hash: String, dir: PathBuf },

    #[error("teacher request {request_id} failed after {attempts} attempts: {reason}")]
    RetriesExhausted {
        request_id: String,
        attempts: u32,
        reason: String,
    },

    #[error("teacher endpoint authentication failed: {0}")]
    Authentication(String),

    #[error("teacher response schema mismatch: {0}")]
    ResponseSchema(String),

    #[error("batch failure rate {failed}/{total} exceeds threshold {threshold}")]
    FailureRateExceeded {
        failed: usize,
        total: usize,
        threshold: f64,
    },

    #[error("parse error: {0}")]
    Parse(#[from] crate::teacher::parse::ParseError),

    #[error("vocabulary too small: {size} distinct tokens (need at least 2)")]
    VocabularyTooSmall { size: usize },

    #[error("gradient length {got} does not match projection d_in {expected}")]
    ProjectionLength { got: usize, expected: usize },

    #[error("feature list empty")]
    EmptyFeatureList,

    #[error("mixed projection seeds: {a} vs {b}")]
    MixedProjectionSeeds { a: u64, b: u64 },

    #[error("feature dimension mismatch: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },

    #[error("k = {k} exceeds number of scores {available}")]
    KTooLarge { k: usize, available: usize },

    #[error("tokenizer version mismatch: index built with {index}, filter running {current}")]
    TokenizerVersion { index: String, current: String },

    #[error("executor setup failed: {0}")]
    ExecutorSetup(String),

    #[error("malformed feature store: {0}")]
    FeatureStore(String),

    #[error("malformed model file: {0}")]
    ModelFile(String),

    #[error("kd round is empty")]
    EmptyKdRound,

    #[error("duplicate kd key (template {template_id}, record {record_id}) in round {round}")]
    DuplicateKdKey {
        template_id: String,
        record_id: String,
        round: String,
    },

    #[error("mixture ratio {a}:{b} not achievable from {nlr} NLR and {tm} TM without upsampling")]
    RatioUnachievable { a: u64, b: u64, nlr: usize, tm: usize },

    #[error("invalid mixture ratio component: {0}")]
    RatioComponent(String),

    #[error("config invalid:\n{}", .0.join("\n"))]
    ConfigInvalid(Vec<String>),

    #[error("unknown stage {0:?}")]
    UnknownStage(String),

    #[error("stage {stage}: missing upstream manifest for {upstream}")]
    MissingUpstreamManifest { stage: String, upstream: String },

    #[error("stage {stage}: stale upstream manifest for {upstream}: {detail}")]
    StaleUpstreamManifest {
        stage: String,
        upstream: String,
        detail: String,
    },

    #[error("stage {stage} failed: {reason}")]
    StageFailed { stage: String, reason: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("toml error: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
