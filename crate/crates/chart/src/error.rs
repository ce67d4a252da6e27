use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Where a point with non-positive Weyl scalar curvature lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `τ_g = 0`.
    N0,
    /// `τ_g < 0`.
    NMinus,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::N0 => f.write_str("N0 (tau = 0)"),
            Region::NMinus => f.write_str("N- (tau < 0)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("parse error at byte {pos} in `{input}`: {msg}")]
    Parse { pos: usize, msg: String, input: String },

    #[error("invalid chart: {0}")]
    Invalid(String),

    #[error("metric is singular at {point:?}")]
    SingularMetric { point: Vec<f64> },

    #[error("point {point:?} is within 2*fd_step of the boundary on axis x{axis}")]
    TooCloseToBoundary { point: Vec<f64>, axis: usize },

    #[error("scalar curvature tau = {tau:e} is not positive at {point:?}: point lies in {region}")]
    NonPositiveScalarCurvature { point: Vec<f64>, tau: f64, region: Region },

    #[error("operation needs a positive definite metric (chart is not Riemannian at {point:?})")]
    NotRiemannian { point: Vec<f64> },

    #[error("canonical metric check failed: tau of the rescaled metric is {tau_tilde} at {point:?}")]
    CanonicalCheck { point: Vec<f64>, tau_tilde: f64 },

    #[error(transparent)]
    Core(#[from] weyl_core::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ChartError>;
