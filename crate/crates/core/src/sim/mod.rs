//! Discrete-time evaluation loop: 100 Hz segment replay, 10 Hz goal updates
//! under observation latency, anticipatory → servoing handoff, hit scoring.

mod benchmark;
mod config;
mod sweep;
mod trial;

pub use benchmark::{run_benchmark, BenchmarkOutcome, RobotSetup};
pub use config::SimConfig;
pub use sweep::{sweep_alphas, SweepCell};
pub use trial::{run_trial, ControllerPolicy, GoalEvent, GoalKind, PolicyKind, TrialOutput};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid sim config: {0}")]
    InvalidConfig(String),
    #[error("segment {id}: {message}")]
    BadSegment { id: String, message: String },
    #[error("policy '{0}' needs a predictor but none was supplied")]
    MissingPredictor(String),
    #[error("robot error: {0}")]
    Robot(#[from] crate::robot::RobotError),
    #[error("predictor error: {0}")]
    Predictor(#[from] crate::predictor::PredictorError),
    #[error("metrics error: {0}")]
    Metrics(#[from] crate::metrics::MetricsError),
    #[error("empty input: {0}")]
    Empty(String),
}
