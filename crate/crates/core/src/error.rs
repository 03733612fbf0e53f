use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty {0} candidate list")]
    EmptyCandidates(&'static str),

    #[error("malformed vocabulary: {0}")]
    MalformedVocab(String),

    #[error("token `{0}` is not in the vocabulary")]
    NotInVocab(String),

    #[error("hyphen segmentation is ambiguous: vocabulary token `{0}` starts with a hyphen")]
    HyphenConflict(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("design matrix is rank deficient; refit with a ridge term")]
    RankDeficient,

    #[error("{group}: SPLIT needs at least 3 distinct bases, found {found}")]
    TooFewBases { group: String, found: usize },

    #[error("missing prediction records for {} item(s): {}", .0.len(), .0.join(", "))]
    MissingRecords(Vec<String>),

    #[error("negative sampling needs at least two prefixes in the lexicon")]
    SinglePrefix,

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("item {0}: sentence does not contain its derivative")]
    SentenceWithoutDerivative(String),

    #[error("regressor is constant; slope is undefined")]
    ConstantRegressor,

    #[error("regression needs at least 3 observations, got {0}")]
    TooFewObservations(usize),

    #[error("label `{0}` is not in the label space")]
    UnknownLabel(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Json { .. } => "json",
            Error::Parse(_) => "parse",
            Error::InvalidInput(_) => "invalid_input",
            Error::EmptyCandidates(_) => "empty_candidates",
            Error::MalformedVocab(_) => "malformed_vocab",
            Error::NotInVocab(_) => "not_in_vocab",
            Error::HyphenConflict(_) => "hyphen_conflict",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::RankDeficient => "rank_deficient",
            Error::TooFewBases { .. } => "too_few_bases",
            Error::MissingRecords(_) => "missing_records",
            Error::SinglePrefix => "single_prefix",
            Error::EmptyTrainingSet => "empty_training_set",
            Error::SentenceWithoutDerivative(_) => "sentence_without_derivative",
            Error::ConstantRegressor => "constant_regressor",
            Error::TooFewObservations(_) => "too_few_observations",
            Error::UnknownLabel(_) => "unknown_label",
        }
    }
}
