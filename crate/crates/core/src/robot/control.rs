//! Minimum-norm workspace control, direction-preserving velocity scaling,
//! and the clamped discrete position update.

use super::limits::{JointLimits, JointState, DOF};
use super::RobotError;
use nalgebra::{SMatrix, SVector, Vector3};

/// Minimum-norm least-squares joint velocities for a workspace velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormSolution {
    pub joint_velocities: SVector<f64, DOF>,
    /// Smallest singular value of the Jacobian; near-singularity diagnostic.
    pub min_singular_value: f64,
}

/// Moore–Penrose solution θ̇ = J⁺·U via the Gram matrix J·Jᵀ.
///
/// Among all minimizers of ‖Jθ̇ − U‖ this returns the one of minimum
/// Euclidean norm; rank deficiency is handled by truncating small
/// eigenvalues of the 3×3 Gram matrix.
pub fn min_norm_joint_velocity(
    jacobian: &SMatrix<f64, 3, DOF>,
    task_velocity: &Vector3<f64>,
) -> MinNormSolution {
    let gram = jacobian * jacobian.transpose();
    let eigen = gram.symmetric_eigen();
    let max_eig = eigen.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let tol = max_eig * 1e-12;
    let mut weights = Vector3::zeros();
    let mut min_sq = f64::INFINITY;
    for i in 0..3 {
        let lambda = eigen.eigenvalues[i];
        min_sq = min_sq.min(lambda.max(0.0));
        if lambda > tol {
            let projection = eigen.eigenvectors.column(i).dot(task_velocity);
            weights += eigen.eigenvectors.column(i) * (projection / lambda);
        }
    }
    MinNormSolution {
        joint_velocities: jacobian.transpose() * weights,
        min_singular_value: min_sq.sqrt(),
    }
}

/// Largest uniform scale s ∈ (0, 1] such that s·θ̇ stays within every
/// joint's velocity limit. Never scales up.
pub fn max_speed_scale(theta_dot: &[f64; DOF], limits: &JointLimits) -> f64 {
    let mut scale = 1.0f64;
    for (i, &v) in theta_dot.iter().enumerate() {
        if v.abs() > 0.0 {
            scale = scale.min(limits.joint(i).max_velocity / v.abs());
        }
    }
    scale
}

/// Direction-preserving scalar β ∈ [−1, 1] such that β·θ̇ obeys every
/// joint's velocity limit and acceleration limit relative to the previous
/// realized velocities over one control step of length `dt`.
///
/// Returns (β·θ̇, β) with the largest feasible β; β = 0 when the previous
/// velocity forces full braking. With the default envelope (vmax ≤ amax·dt
/// on every joint) the feasible set is never empty in closed loop.
pub fn constrain_velocity(
    theta_dot_cmd: &[f64; DOF],
    theta_dot_prev: &[f64; DOF],
    limits: &JointLimits,
    dt: f64,
) -> Result<([f64; DOF], f64), RobotError> {
    if !(dt > 0.0) {
        return Err(RobotError::BadDt(dt));
    }
    if theta_dot_cmd
        .iter()
        .chain(theta_dot_prev.iter())
        .any(|v| !v.is_finite())
    {
        return Err(RobotError::NonFinite);
    }

    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    let mut feasible = true;
    for i in 0..DOF {
        let cmd = theta_dot_cmd[i];
        let prev = theta_dot_prev[i];
        let vmax = limits.joint(i).max_velocity;
        let astep = limits.joint(i).max_acceleration * dt;
        if cmd.abs() > 0.0 {
            let vbound = vmax / cmd.abs();
            lo = lo.max(-vbound);
            hi = hi.min(vbound);
            // |β·cmd − prev| ≤ astep  →  β ∈ [(prev − astep)/cmd, (prev + astep)/cmd]
            let (a, b) = ((prev - astep) / cmd, (prev + astep) / cmd);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        } else if prev.abs() > astep {
            feasible = false;
        }
    }

    let beta = if feasible && lo <= hi + 1e-15 {
        hi.max(lo)
    } else {
        0.0
    };
    let mut scaled = [0.0; DOF];
    for i in 0..DOF {
        scaled[i] = beta * theta_dot_cmd[i];
    }
    Ok((scaled, beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub positions: [f64; DOF],
    /// Possibly clamp-truncated velocity actually realized over the step.
    pub realized_velocities: [f64; DOF],
}

/// Clamped Euler update: θ⁺ = clamp(θ + dt·α·θ̇*, θmin, θmax).
pub fn step_joints(
    theta: &[f64; DOF],
    theta_dot_star: &[f64; DOF],
    alpha: f64,
    limits: &JointLimits,
    dt: f64,
) -> Result<StepResult, RobotError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(RobotError::BadAlpha(alpha));
    }
    if !(dt > 0.0) {
        return Err(RobotError::BadDt(dt));
    }
    let mut positions = [0.0; DOF];
    let mut realized = [0.0; DOF];
    for i in 0..DOF {
        let limit = limits.joint(i);
        let next = (theta[i] + dt * alpha * theta_dot_star[i])
            .clamp(limit.min_position, limit.max_position);
        positions[i] = next;
        realized[i] = (next - theta[i]) / dt;
    }
    Ok(StepResult {
        positions,
        realized_velocities: realized,
    })
}

/// Check a control-rate trace against the limit envelope.
///
/// Positions must stay inside the bounds, realized velocities inside vmax,
/// and velocity changes between consecutive states inside amax·Δt, all
/// within `tol`.
pub fn validate_trace(
    trace: &[JointState],
    limits: &JointLimits,
    dt: f64,
    tol: f64,
) -> Result<(), RobotError> {
    for state in trace {
        limits.check_positions(&state.positions, tol)?;
        for (i, &v) in state.velocities.iter().enumerate() {
            let limit = limits.joint(i);
            if v.abs() > limit.max_velocity + tol {
                return Err(RobotError::VelocityOutOfLimits {
                    name: limit.name.clone(),
                    value: v,
                    max: limit.max_velocity,
                });
            }
        }
    }
    for pair in trace.windows(2) {
        for i in 0..DOF {
            let limit = limits.joint(i);
            let accel = (pair[1].velocities[i] - pair[0].velocities[i]) / dt;
            if accel.abs() > limit.max_acceleration + tol {
                return Err(RobotError::AccelerationOutOfLimits {
                    name: limit.name.clone(),
                    value: accel,
                    max: limit.max_acceleration,
                });
            }
        }
    }
    Ok(())
}
