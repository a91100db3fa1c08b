//! Kinematic chain description and forward kinematics.

use super::limits::{JointKind, JointLimits, DOF};
use super::RobotError;
use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const CHAIN_SCHEMA_VERSION: u32 = 1;

/// One joint: motion axis and the fixed offset from the previous joint
/// origin, both expressed in the parent frame at the zero configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDesc {
    pub name: String,
    pub kind: JointKind,
    pub axis: [f64; 3],
    pub offset: [f64; 3],
}

/// Paddle pose produced by forward kinematics: position of the paddle
/// center and its outward normal, world frame, cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectorPose {
    pub position: Vector3<f64>,
    pub normal: Vector3<f64>,
}

/// Ordered joint descriptors plus the paddle mount.
///
/// The chain geometry is artifact data: nominal link offsets for a 7-axis
/// arm riding on a planar 2-axis base, mounted behind the table so that the
/// ready configuration puts the paddle on the strike plane facing the
/// opponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KinematicChain {
    pub version: u32,
    /// World position of the base (first joint origin) at zero configuration.
    pub base_translation: [f64; 3],
    pub joints: Vec<JointDesc>,
    /// Paddle center offset from the last joint frame.
    pub paddle_offset: [f64; 3],
    /// Paddle outward normal in the last joint frame.
    pub paddle_normal: [f64; 3],
    /// Shared episode start configuration (rad/cm).
    pub ready_positions: [f64; DOF],
}

impl KinematicChain {
    /// Built-in chain: arm axes z,y,z,−y,z,y,z with nominal link offsets.
    ///
    /// The ready pose turns A1 by −90° so the pitch joints act in the y–z
    /// plane, then S-bends the arm (A2 −50°, A4 +60°, A6 +20°) for
    /// dexterity; the base sits so the ready paddle lands exactly at
    /// (0, −140, 16) with its normal on +y.
    pub fn standard() -> Self {
        let joint = |name: &str, kind: JointKind, axis: [f64; 3], offset: [f64; 3]| JointDesc {
            name: name.into(),
            kind,
            axis,
            offset,
        };
        use JointKind::{Prismatic, Revolute};
        Self {
            version: CHAIN_SCHEMA_VERSION,
            base_translation: [0.0, -237.761_571_442_433_4, -33.316_273_873_807_91],
            joints: vec![
                joint("X1", Prismatic, [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
                joint("Y1", Prismatic, [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]),
                joint("A1", Revolute, [0.0, 0.0, 1.0], [0.0, 0.0, 16.0]),
                joint("A2", Revolute, [0.0, 1.0, 0.0], [0.0, 0.0, 20.0]),
                joint("A3", Revolute, [0.0, 0.0, 1.0], [0.0, 0.0, 20.0]),
                joint("A4", Revolute, [0.0, -1.0, 0.0], [0.0, 0.0, 22.0]),
                joint("A5", Revolute, [0.0, 0.0, 1.0], [0.0, 0.0, 18.0]),
                joint("A6", Revolute, [0.0, 1.0, 0.0], [0.0, 0.0, 22.0]),
                joint("A7", Revolute, [0.0, 0.0, 1.0], [0.0, 0.0, 8.0]),
            ],
            paddle_offset: [0.0, 0.0, 20.0],
            paddle_normal: [0.0, 0.0, 1.0],
            ready_positions: [
                0.0,
                0.0,
                (-90.0f64).to_radians(),
                (-50.0f64).to_radians(),
                0.0,
                (60.0f64).to_radians(),
                0.0,
                (20.0f64).to_radians(),
                0.0,
            ],
        }
    }

    pub fn validate(&self) -> Result<(), RobotError> {
        if self.version != CHAIN_SCHEMA_VERSION {
            return Err(RobotError::InvalidChain(format!(
                "unsupported chain schema version {}",
                self.version
            )));
        }
        if self.joints.len() != DOF {
            return Err(RobotError::InvalidChain(format!(
                "expected {DOF} joints, got {}",
                self.joints.len()
            )));
        }
        for joint in &self.joints {
            let norm = Vector3::from(joint.axis).norm();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(RobotError::InvalidChain(format!(
                    "{}: axis must be a unit vector",
                    joint.name
                )));
            }
        }
        Ok(())
    }

    pub fn from_path(path: &Path) -> Result<Self, RobotError> {
        let text = std::fs::read_to_string(path).map_err(|e| RobotError::Config(e.to_string()))?;
        let chain: Self = if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            toml::from_str(&text).map_err(|e| RobotError::Config(e.to_string()))?
        } else {
            serde_json::from_str(&text).map_err(|e| RobotError::Config(e.to_string()))?
        };
        chain.validate()?;
        Ok(chain)
    }

    /// World frames of every joint origin plus the final paddle pose.
    ///
    /// Returns (per-joint world axis, per-joint world origin, paddle pose);
    /// used by both forward kinematics and the Jacobian. Positions are
    /// checked against `limits` when given.
    pub(crate) fn frames(
        &self,
        theta: &[f64; DOF],
        limits: Option<&JointLimits>,
    ) -> Result<(Vec<Vector3<f64>>, Vec<Vector3<f64>>, EffectorPose), RobotError> {
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(RobotError::NonFinite);
        }
        if let Some(limits) = limits {
            limits.check_positions(theta, 1e-9)?;
        }
        let mut rotation = Matrix3::identity();
        let mut position = Vector3::from(self.base_translation);
        let mut axes = Vec::with_capacity(DOF);
        let mut origins = Vec::with_capacity(DOF);
        for (joint, &value) in self.joints.iter().zip(theta.iter()) {
            position += rotation * Vector3::from(joint.offset);
            let world_axis = rotation * Vector3::from(joint.axis);
            axes.push(world_axis);
            origins.push(position);
            match joint.kind {
                JointKind::Prismatic => {
                    position += world_axis * value;
                }
                JointKind::Revolute => {
                    let rot = Rotation3::from_axis_angle(
                        &Unit::new_normalize(Vector3::from(joint.axis)),
                        value,
                    );
                    rotation *= rot.matrix();
                }
            }
        }
        let paddle_position = position + rotation * Vector3::from(self.paddle_offset);
        let normal = rotation * Vector3::from(self.paddle_normal);
        Ok((
            axes,
            origins,
            EffectorPose {
                position: paddle_position,
                normal,
            },
        ))
    }

    /// Paddle pose at a configuration; errors on out-of-limit positions.
    pub fn forward_kinematics(
        &self,
        theta: &[f64; DOF],
        limits: Option<&JointLimits>,
    ) -> Result<EffectorPose, RobotError> {
        Ok(self.frames(theta, limits)?.2)
    }
}
