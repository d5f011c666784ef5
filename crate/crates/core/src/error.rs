use thiserror::Error;

/// Failures shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: class on {left} points vs class on {right} points")]
    DimensionMismatch { left: usize, right: usize },

    #[error("class has non-integral coefficients: {0}")]
    NonIntegral(String),

    #[error("class is not pseudo-effective: {0}")]
    NotPseudoEffective(String),

    #[error("class is not big: {0}")]
    NotBig(String),

    #[error("curve catalog insufficient (d_max = {d_max}): {reason}")]
    CatalogInsufficient { d_max: i64, reason: String },

    #[error("catalog exceeds the configured cap of {0} entries")]
    CatalogTooLarge(usize),

    #[error("Gram matrix of the support is not negative definite: {0}")]
    GramNotNegativeDefinite(String),

    #[error("characteristic {characteristic} too small for degree {degree}")]
    CharacteristicTooSmall { characteristic: u64, degree: i64 },

    #[error("parameter outside admissible window: {0}")]
    OutsideWindow(String),

    #[error("value is not rational: {0}")]
    Irrational(String),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
