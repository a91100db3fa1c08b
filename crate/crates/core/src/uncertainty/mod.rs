//! Confidence and uncertainty proxies for anticipatory predictions, their
//! diagnostics, and the confidence → commanded-speed policy map.

mod conformal;
mod diagnostics;
mod estimators;
mod policy;

pub use conformal::{ConformalCalibration, ConformalInterval};
pub use diagnostics::{confidence_residual_diagnostics, CorrelationReport, ScatterRow};
pub use estimators::{
    ensemble_strike_stddev, error_to_confidence, fit_kappa, KnnErrorModel, TimeToHitConfidence,
};
pub use policy::{confidence_to_alpha, continuous_alpha, AlphaPolicy, Phase};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum UncertaintyError {
    #[error("calibration scores must not be empty")]
    EmptyCalibration,
    #[error("miscoverage must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("need at least {needed} members, got {got}")]
    TooFewMembers { needed: usize, got: usize },
    #[error("paired samples must have equal length ≥ 3")]
    BadPairing,
    #[error("time-to-hit input must be non-negative, got {0}")]
    NegativeTimestep(f64),
    #[error("cannot calibrate: {0}")]
    Calibration(String),
    #[error("prediction error: {0}")]
    Predictor(#[from] crate::predictor::PredictorError),
}
