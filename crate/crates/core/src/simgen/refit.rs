//! Ground-truth refitting from stored ball samples, mirroring the recorded
//! pipeline: low-pass filter, bounce detection, piecewise fit.

use super::GenError;
use crate::geometry::lowpass_filter;
use crate::segment::Segment;
use crate::trajectory::{
    detect_bounce_index, fit_piecewise, PiecewiseFit, TrajectoryError, BALL_RADIUS_CM,
};

/// Refit the piecewise-linear parameters from a segment's own post-hit
/// samples.
///
/// Samples inside the filter's support around the detected bounce blend the
/// two slopes and are excluded; everything else is exactly line-preserving
/// under the zero-phase filter, so on noiseless paths this reproduces the
/// generating parameters to machine precision.
pub fn refit_truth(segment: &Segment, filter_window: usize) -> Result<PiecewiseFit, GenError> {
    let n = segment.post_hit_ball.len();
    let window = if filter_window % 2 == 1 {
        filter_window.min(if n % 2 == 1 { n } else { n.saturating_sub(1) })
    } else {
        return Err(GenError::InvalidConfig("filter window must be odd".into()));
    };
    let filtered = lowpass_filter(&segment.post_hit_ball, window)?;

    // detect on the raw signal: filtering rounds the z kink off above the
    // ball-radius threshold
    let bounce = detect_bounce_index(&segment.post_hit_ball, BALL_RADIUS_CM).ok_or(
        GenError::Trajectory(TrajectoryError::InsufficientSamples {
            side: "post-bounce",
            needed: 2,
            got: 0,
        }),
    )?;
    let drop_radius = window / 2 + 1;
    let pre_end = bounce.saturating_sub(drop_radius);
    let post_start = bounce + drop_radius + 1;
    if pre_end < 2 || post_start + 2 > n {
        return Err(GenError::Trajectory(TrajectoryError::InsufficientSamples {
            side: "around the bounce",
            needed: 2,
            got: pre_end.min(n.saturating_sub(post_start)),
        }));
    }

    // boundary between the kept groups; every kept pre sample lies above
    // it in y, every kept post sample below
    let boundary_y = 0.5 * (filtered[pre_end - 1][1] + filtered[post_start][1]);
    let samples: Vec<(f64, f64)> = filtered
        .iter()
        .enumerate()
        .filter(|(i, _)| *i < pre_end || *i >= post_start)
        .map(|(_, p)| (p[1], p[0]))
        .collect();
    Ok(fit_piecewise(&samples, boundary_y)?)
}
