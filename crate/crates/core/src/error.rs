//! Error taxonomy shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least {min} samples, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("degenerate input: repeated point at index {index}")]
    DegeneratePoints { index: usize },

    #[error("sample spacing ratio {ratio:.3} exceeds the allowed {max:.1}")]
    SpacingRatio { ratio: f64, max: f64 },

    #[error("invalid profile: {reason}")]
    InvalidProfile { reason: String },

    #[error("numerical failure: non-finite {field} at index {index}")]
    NonFinite { field: &'static str, index: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("oracle queried at t = {t} outside its valid interval ({lo}, {hi})")]
    InvalidTime { t: f64, lo: f64, hi: f64 },

    #[error("flow reached extinction: t = {t} is at or past t_ext = {t_ext}")]
    Extinction { t: f64, t_ext: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("diameter is only defined for closed frames (got {rep} with open ends)")]
    UnsupportedFrame { rep: &'static str },

    #[error("spacetime endpoint t = {t} does not match any stored frame")]
    EndpointOutsideHistory { t: f64 },

    #[error("minimizer stayed on the search boundary after {expansions} expansions: unbounded direction {direction}")]
    UnboundedDirection { direction: usize, expansions: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
