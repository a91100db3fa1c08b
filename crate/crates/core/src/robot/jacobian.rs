//! Positional Jacobian of the paddle center.

use super::chain::KinematicChain;
use super::limits::{JointKind, JointLimits, DOF};
use super::RobotError;
use nalgebra::SMatrix;

/// 3×9 Jacobian ∂(paddle position)/∂θ at a configuration.
///
/// Prismatic columns are the (constant) world joint axes; revolute columns
/// are axis × (paddle − joint origin).
pub fn spatial_jacobian(
    chain: &KinematicChain,
    theta: &[f64; DOF],
    limits: Option<&JointLimits>,
) -> Result<SMatrix<f64, 3, DOF>, RobotError> {
    let (axes, origins, pose) = chain.frames(theta, limits)?;
    let mut jacobian = SMatrix::<f64, 3, DOF>::zeros();
    for (col, joint) in chain.joints.iter().enumerate() {
        let column = match joint.kind {
            JointKind::Prismatic => axes[col],
            JointKind::Revolute => axes[col].cross(&(pose.position - origins[col])),
        };
        jacobian.set_column(col, &column);
    }
    Ok(jacobian)
}
