//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {detail}")]
    DimensionMismatch {
        context: &'static str,
        detail: String,
    },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("input is rank deficient")]
    RankDeficient,

    #[error("exterior power degree {k} out of range for dimension {dim}")]
    DegreeOutOfRange { k: usize, dim: usize },

    #[error("size guard exceeded in {context}: {size} > {limit}")]
    GuardExceeded {
        context: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid generator index {index} for {generators} generators")]
    InvalidGenerator { index: i32, generators: usize },

    #[error("boundary ray has a trivial period")]
    TrivialPeriod,

    #[error("could not sample {requested} distinct boundary rays (found {found})")]
    SamplingExhausted { requested: usize, found: usize },

    #[error("empty input to {0}")]
    EmptyInput(&'static str),

    #[error("representation validation failed: {0}")]
    Validation(String),

    #[error("singular value iteration did not converge")]
    SvdNoConvergence,

    #[error("no singular value gap at index {k}: ratio {ratio}")]
    GapSanityFailed { k: usize, ratio: f64 },

    #[error("flag approximation did not converge by depth {max_depth} (last principal angle {last_gap})")]
    FlagNoConvergence { max_depth: usize, last_gap: f64 },

    #[error("point {index} is not transverse to the hyperplane (gap {gap})")]
    NonTransverse { index: usize, gap: f64 },

    #[error("not enough data for growth fit: {have} usable lengths, need {need}")]
    InsufficientData { have: usize, need: usize },

    #[error("representation carries no bilinear form, required by {0}")]
    MissingForm(&'static str),

    #[error("representation is already over the complex field")]
    AlreadyComplex,
}
