//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("feature {feature} outside universe 1..={n}")]
    FeatureOutOfUniverse { feature: u32, n: u32 },

    #[error("universe mismatch: {left} vs {right}")]
    UniverseMismatch { left: u32, right: u32 },

    #[error("boolean question uses {count} distinct literals, at most {max} allowed")]
    TooManyLiterals { count: usize, max: usize },

    #[error("condition is unsatisfiable")]
    Unsatisfiable,

    #[error("no sample satisfying the condition found in {attempts} attempts")]
    SamplingFailed { attempts: u32 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("table shape mismatch: {0}")]
    TableShape(String),

    #[error("universe of {n} features exceeds the enumeration guard of {max}")]
    UniverseTooLarge { n: u32, max: u32 },

    #[error("unknown estimator {name:?}; available: {available}")]
    UnknownEstimator { name: String, available: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}
