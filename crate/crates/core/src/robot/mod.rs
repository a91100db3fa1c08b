//! 9-DOF kinematic model (2 prismatic base joints + 7 revolute arm joints),
//! joint-limit enforcement, forward kinematics, the positional Jacobian, and
//! the closed-loop Cartesian control pieces.

mod chain;
mod control;
mod jacobian;
mod limits;

pub use chain::{EffectorPose, JointDesc, KinematicChain, CHAIN_SCHEMA_VERSION};
pub use control::{
    constrain_velocity, max_speed_scale, min_norm_joint_velocity, step_joints, validate_trace,
    MinNormSolution, StepResult,
};
pub use jacobian::spatial_jacobian;
pub use limits::{
    JointKind, JointLimit, JointLimitSpec, JointLimits, JointState, RobotLimitsConfig, DOF,
    LIMITS_SCHEMA_VERSION,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RobotError {
    #[error("joint {name} position {value:.6} outside [{min:.6}, {max:.6}]")]
    PositionOutOfLimits {
        name: String,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("joint {name} velocity {value:.6} exceeds {max:.6}")]
    VelocityOutOfLimits { name: String, value: f64, max: f64 },
    #[error("joint {name} acceleration {value:.6} exceeds {max:.6}")]
    AccelerationOutOfLimits { name: String, value: f64, max: f64 },
    #[error("invalid limits: {0}")]
    InvalidLimits(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("inputs must be finite")]
    NonFinite,
    #[error("alpha {0} outside [0, 1]")]
    BadAlpha(f64),
    #[error("dt must be positive, got {0}")]
    BadDt(f64),
    #[error("config parse error: {0}")]
    Config(String),
}
