//! Joint limit envelope: positions, velocities, accelerations per joint.
//!
//! The configuration file keeps the vendor units (meters for the base
//! prismatic joints, degrees for the arm); everything is converted to cm and
//! radians on load and stays that way internally.

use super::RobotError;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DOF: usize = 9;
pub const LIMITS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointKind {
    Prismatic,
    Revolute,
}

/// One joint's envelope in config units (m or deg as given by `kind`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointLimitSpec {
    pub name: String,
    pub kind: JointKind,
    pub min_position: f64,
    pub max_position: f64,
    pub max_velocity: f64,
    pub max_acceleration: f64,
}

/// Versioned limits configuration, loadable from JSON or TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotLimitsConfig {
    pub version: u32,
    pub joints: Vec<JointLimitSpec>,
}

impl RobotLimitsConfig {
    /// Effective limits of the 2-prismatic + 7-revolute setup, vendor units.
    pub fn table_defaults() -> Self {
        let prismatic = |name: &str| JointLimitSpec {
            name: name.into(),
            kind: JointKind::Prismatic,
            min_position: -1.0,
            max_position: 1.0,
            max_velocity: 1.1,
            max_acceleration: 15.0,
        };
        let revolute = |name: &str, rom: f64, acc: f64, vel: f64| JointLimitSpec {
            name: name.into(),
            kind: JointKind::Revolute,
            min_position: -rom,
            max_position: rom,
            max_velocity: vel,
            max_acceleration: acc,
        };
        Self {
            version: LIMITS_SCHEMA_VERSION,
            joints: vec![
                prismatic("X1"),
                prismatic("Y1"),
                revolute("A1", 170.0, 3.69e3, 85.0),
                revolute("A2", 120.0, 3.47e3, 85.0),
                revolute("A3", 170.0, 7.42e3, 100.0),
                revolute("A4", 120.0, 1.37e4, 75.0),
                revolute("A5", 170.0, 3.79e4, 130.0),
                revolute("A6", 120.0, 3.81e5, 135.0),
                revolute("A7", 175.0, 5.72e5, 135.0),
            ],
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, RobotError> {
        let text = std::fs::read_to_string(path).map_err(|e| RobotError::Config(e.to_string()))?;
        let config: Self = if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            toml::from_str(&text).map_err(|e| RobotError::Config(e.to_string()))?
        } else {
            serde_json::from_str(&text).map_err(|e| RobotError::Config(e.to_string()))?
        };
        Ok(config)
    }

    /// Convert to internal units (cm, rad, s) and validate.
    pub fn to_limits(&self) -> Result<JointLimits, RobotError> {
        if self.version != LIMITS_SCHEMA_VERSION {
            return Err(RobotError::Config(format!(
                "unsupported limits schema version {}",
                self.version
            )));
        }
        if self.joints.len() != DOF {
            return Err(RobotError::InvalidLimits(format!(
                "expected {DOF} joints, got {}",
                self.joints.len()
            )));
        }
        let joints = self
            .joints
            .iter()
            .map(|spec| {
                let scale = match spec.kind {
                    JointKind::Prismatic => 100.0,                       // m → cm
                    JointKind::Revolute => std::f64::consts::PI / 180.0, // deg → rad
                };
                let limit = JointLimit {
                    name: spec.name.clone(),
                    kind: spec.kind,
                    min_position: spec.min_position * scale,
                    max_position: spec.max_position * scale,
                    max_velocity: spec.max_velocity * scale,
                    max_acceleration: spec.max_acceleration * scale,
                };
                if !(limit.min_position < limit.max_position) {
                    return Err(RobotError::InvalidLimits(format!(
                        "{}: min must be below max",
                        spec.name
                    )));
                }
                if !(limit.max_velocity > 0.0) || !(limit.max_acceleration > 0.0) {
                    return Err(RobotError::InvalidLimits(format!(
                        "{}: velocity and acceleration limits must be positive",
                        spec.name
                    )));
                }
                Ok(limit)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(JointLimits {
            joints: joints.try_into().expect("length checked above"),
        })
    }
}

/// One joint's envelope in internal units (cm or rad).
#[derive(Debug, Clone, PartialEq)]
pub struct JointLimit {
    pub name: String,
    pub kind: JointKind,
    pub min_position: f64,
    pub max_position: f64,
    pub max_velocity: f64,
    pub max_acceleration: f64,
}

/// Full 9-joint envelope in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct JointLimits {
    joints: [JointLimit; DOF],
}

impl JointLimits {
    pub fn table_defaults() -> Self {
        RobotLimitsConfig::table_defaults()
            .to_limits()
            .expect("built-in defaults are valid")
    }

    pub fn joint(&self, i: usize) -> &JointLimit {
        &self.joints[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &JointLimit> {
        self.joints.iter()
    }

    pub fn check_positions(&self, positions: &[f64; DOF], tol: f64) -> Result<(), RobotError> {
        for (limit, &value) in self.joints.iter().zip(positions) {
            if value < limit.min_position - tol || value > limit.max_position + tol {
                return Err(RobotError::PositionOutOfLimits {
                    name: limit.name.clone(),
                    value,
                    min: limit.min_position,
                    max: limit.max_position,
                });
            }
        }
        Ok(())
    }

    pub fn clamp_positions(&self, positions: &mut [f64; DOF]) {
        for (limit, value) in self.joints.iter().zip(positions.iter_mut()) {
            *value = value.clamp(limit.min_position, limit.max_position);
        }
    }
}

/// Joint positions and velocities at a point in time (cm/rad, seconds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointState {
    pub positions: [f64; DOF],
    pub velocities: [f64; DOF],
    pub time: f64,
}

impl JointState {
    pub fn at_rest(positions: [f64; DOF], time: f64) -> Self {
        Self {
            positions,
            velocities: [0.0; DOF],
            time,
        }
    }
}
