use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("label value {0} is not -1 or +1")]
    InvalidLabel(i64),

    #[error("invalid noise specification: {0}")]
    InvalidNoiseSpec(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("non-finite input {0}")]
    NonFiniteInput(f64),

    #[error("label pair ({0}, {1}) is not a pair of distinct labels")]
    InvalidPair(usize, usize),

    #[error("linear system is singular (pivot {pivot:e} in column {column})")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("cannot enumerate 2^{0} label vectors (limit is 2^{max})", max = crate::noise::MAX_ENUMERATION_LABELS)]
    EnumerationTooLarge(usize),

    #[error("empty batch")]
    EmptyBatch,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("training diverged at epoch {epoch}, step {step} (loss {loss})")]
    DivergedTraining { epoch: usize, step: usize, loss: f64 },

    #[error("synthetic generation failed: {0}")]
    GenerationFailed(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
