use thiserror::Error;

use crate::certificates::RegionVerdict;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("oracle `{oracle}` does not provide {what}")]
    MissingMetadata { oracle: String, what: &'static str },

    #[error("parameters outside region {}: {}", .0.region, .0.describe())]
    OutsideRegion(RegionVerdict),

    #[error("lemma inapplicable: {0}")]
    LemmaInapplicable(String),

    #[error("no admissible balancing parameter found for alpha={alpha}, beta={beta}")]
    NoAdmissibleTheta { alpha: f64, beta: f64 },

    #[error("cannot estimate a rate: {0}")]
    RateEstimate(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
