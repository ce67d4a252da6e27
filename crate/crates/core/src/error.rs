use thiserror::Error;

use crate::tensor::SpaceTag;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} is too small (need n >= 3)")]
    DimensionTooSmall { n: usize },

    #[error("signature ({p}, {q}) does not add up to dimension {n}")]
    SignatureMismatch { n: usize, p: usize, q: usize },

    #[error("dimension {n} exceeds the configured cap {cap}")]
    DimensionTooLarge { n: usize, cap: usize },

    #[error("invalid slot pair ({a}, {b}); slots are 1..=4 and must differ")]
    InvalidSlot { a: usize, b: usize },

    #[error("tensors live over different models")]
    ModelMismatch,

    #[error("bilinear form is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("tensor does not have the required symmetry type: {0}")]
    WrongSymmetryType(String),

    #[error("tensor is not in the Weyl space (worst residual {residual:e} on {constraint})")]
    NotWeyl { residual: f64, constraint: String },

    #[error("component index {index} out of range 1..={max}")]
    ComponentIndex { index: usize, max: usize },

    #[error("space {0} is not available for this operation")]
    UnsupportedSpace(SpaceTag),

    #[error("malformed tensor document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
