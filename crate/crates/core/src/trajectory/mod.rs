//! Post-hit ball trajectory models: the piecewise-linear anticipatory
//! parametrization with its area loss, and the dual-quadratic servoing
//! estimator with an elastic bounce.

mod piecewise;
mod servo;

pub use piecewise::{
    fit_piecewise, trajectory_loss, PiecewiseFit, PiecewiseLinearXY, DEFAULT_LOSS_STEP,
    LOSS_POST_RANGE, LOSS_PRE_RANGE,
};
pub use servo::{
    detect_bounce_index, fit_servo_estimate, QuadraticCurve, ServoEstimate, BALL_RADIUS_CM,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("parameters must be finite")]
    NonFiniteParams,
    #[error("need at least {needed} samples on the {side} side, got {got}")]
    InsufficientSamples {
        side: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("loss step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("loss step {step} does not divide the evaluation range {range}")]
    StepDoesNotDivide { step: f64, range: f64 },
    #[error("least-squares solve failed: {0}")]
    SolveFailed(String),
    #[error("trajectory never reaches the strike plane y = {0}")]
    NoStrikeCrossing(f64),
}
