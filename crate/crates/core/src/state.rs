//! One 100 Hz frame of game state and its flat 39-vector encoding.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of scalars in a flattened frame: 8 joints × 3 + 9 rotation + 3
/// translation + 3 ball.
pub const STATE_DIM: usize = 39;

/// Tolerance for the paddle rotation orthonormality check.
pub const ROTATION_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("paddle rotation is not orthonormal with det +1 (max deviation {0:.3e})")]
    InvalidRotation(f64),
    #[error("state vector has wrong width: expected {STATE_DIM}, got {0}")]
    BadWidth(usize),
    #[error("state contains non-finite values")]
    NonFinite,
}

/// Rigid transform of the opponent's paddle: row-major rotation + translation, cm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaddlePose {
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
}

impl PaddlePose {
    pub fn identity_at(translation: [f64; 3]) -> Self {
        Self {
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation,
        }
    }

    /// Max deviation of RᵀR from I plus |det − 1|.
    pub fn rotation_deviation(&self) -> f64 {
        let r = Matrix3::from_fn(|i, j| self.rotation[i][j]);
        let gram = r.transpose() * r;
        let mut dev: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram[(i, j)] - target).abs());
            }
        }
        dev.max((r.determinant() - 1.0).abs())
    }
}

/// One frame: opponent pose joints, paddle pose, ball position, 100 Hz index.
///
/// `timestep` follows the segment convention: the opponent strikes the ball
/// at t = 0, so pre-hit frames carry negative indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub pose_joints: [[f64; 3]; 8],
    pub paddle: PaddlePose,
    pub ball: [f64; 3],
    pub timestep: i32,
}

impl GameState {
    pub fn new(
        pose_joints: [[f64; 3]; 8],
        paddle: PaddlePose,
        ball: [f64; 3],
        timestep: i32,
    ) -> Result<Self, StateError> {
        let s = Self {
            pose_joints,
            paddle,
            ball,
            timestep,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), StateError> {
        let flat = self.flatten();
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(StateError::NonFinite);
        }
        let dev = self.paddle.rotation_deviation();
        if dev > ROTATION_TOL {
            return Err(StateError::InvalidRotation(dev));
        }
        Ok(())
    }

    /// Deterministic flattening: joints (24), rotation row-major (9),
    /// translation (3), ball (3).
    pub fn flatten(&self) -> [f64; STATE_DIM] {
        let mut out = [0.0; STATE_DIM];
        let mut k = 0;
        for joint in &self.pose_joints {
            out[k..k + 3].copy_from_slice(joint);
            k += 3;
        }
        for row in &self.paddle.rotation {
            out[k..k + 3].copy_from_slice(row);
            k += 3;
        }
        out[k..k + 3].copy_from_slice(&self.paddle.translation);
        k += 3;
        out[k..k + 3].copy_from_slice(&self.ball);
        out
    }

    /// Inverse of [`GameState::flatten`]; the timestep is not part of the 39
    /// scalars and must be supplied.
    pub fn unflatten(values: &[f64], timestep: i32) -> Result<Self, StateError> {
        if values.len() != STATE_DIM {
            return Err(StateError::BadWidth(values.len()));
        }
        let mut pose_joints = [[0.0; 3]; 8];
        for (j, joint) in pose_joints.iter_mut().enumerate() {
            joint.copy_from_slice(&values[j * 3..j * 3 + 3]);
        }
        let mut rotation = [[0.0; 3]; 3];
        for (i, row) in rotation.iter_mut().enumerate() {
            row.copy_from_slice(&values[24 + i * 3..24 + i * 3 + 3]);
        }
        let mut translation = [0.0; 3];
        translation.copy_from_slice(&values[33..36]);
        let mut ball = [0.0; 3];
        ball.copy_from_slice(&values[36..39]);
        Self::new(
            pose_joints,
            PaddlePose {
                rotation,
                translation,
            },
            ball,
            timestep,
        )
    }
}
