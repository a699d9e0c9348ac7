use alloc::string::String;

use crate::corpus::Label;

/// Errors raised by the screening core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("document `{0}` has empty text")]
    EmptyText(String),
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("invalid label `{0}`: expected 0 or 1")]
    InvalidLabel(String),
    #[error("document `{0}` is unlabeled")]
    Unlabeled(String),
    #[error("test fraction {0} must lie strictly between 0 and 1")]
    TestFraction(f64),
    #[error("cannot split {n} documents with test fraction {fraction} into two non-empty halves")]
    SplitTooSmall { n: usize, fraction: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no features: every training document is empty after stop-word removal")]
    NoFeatures,
    #[error("training data contains no documents with label {0}")]
    MissingClass(Label),
    #[error("non-finite feature value in row {0}")]
    NonFinite(usize),
    #[error("length mismatch: {0} labels against {1} predictions")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    Empty,
    #[error("t-test needs at least two values per sample (got {0} and {1})")]
    SampleTooSmall(usize, usize),
    #[error("t-test undefined: both samples have zero variance but different means")]
    ZeroVariance,
    #[error("no fold with both classes in training after {0} draws")]
    DegenerateFolds(u32),
    #[error("model state is inconsistent: {0}")]
    InvalidModel(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
