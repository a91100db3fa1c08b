//! Piecewise-linear x(y) trajectory parametrization and its area loss.

use super::TrajectoryError;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Default y-grid step (cm) for [`trajectory_loss`].
pub const DEFAULT_LOSS_STEP: f64 = 10.0;
/// Pre-bounce loss grid runs from +140 down to −10 inclusive.
pub const LOSS_PRE_RANGE: (f64, f64) = (140.0, -10.0);
/// Post-bounce loss grid runs from −70 down to −140 inclusive.
pub const LOSS_POST_RANGE: (f64, f64) = (-70.0, -140.0);

/// Ball x as a function of y: slope `a1` before the table bounce, `a2`
/// after it, shared intercept `b`. Both pieces equal `b` at y = 0, so the
/// parametrized curve is continuous at the junction by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearXY {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
}

impl PiecewiseLinearXY {
    pub fn new(a1: f64, a2: f64, b: f64) -> Result<Self, TrajectoryError> {
        if !(a1.is_finite() && a2.is_finite() && b.is_finite()) {
            return Err(TrajectoryError::NonFiniteParams);
        }
        Ok(Self { a1, a2, b })
    }

    /// The pre-bounce line a1·y + b, evaluated without the branch cut.
    pub fn pre_line(&self, y: f64) -> f64 {
        self.a1 * y + self.b
    }

    /// The post-bounce line a2·y + b, evaluated without the branch cut.
    pub fn post_line(&self, y: f64) -> f64 {
        self.a2 * y + self.b
    }

    /// Branching evaluation: pre-bounce slope for y ≥ 0, post-bounce for y < 0.
    pub fn eval(&self, y: f64) -> f64 {
        if y >= 0.0 {
            self.pre_line(y)
        } else {
            self.post_line(y)
        }
    }

    /// Strike-point x where the post-bounce line crosses the strike plane.
    pub fn strike_x(&self, strike_plane_y: f64) -> f64 {
        self.post_line(strike_plane_y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseFit {
    pub params: PiecewiseLinearXY,
    pub rms_residual: f64,
}

/// Joint least squares for (a1, a2, b) with a shared intercept.
///
/// Samples are (y, x) pairs; samples with y > `bounce_y` constrain the
/// pre-bounce slope, samples with y ≤ `bounce_y` the post-bounce slope.
/// Requires at least two samples on each side.
pub fn fit_piecewise(
    samples: &[(f64, f64)],
    bounce_y: f64,
) -> Result<PiecewiseFit, TrajectoryError> {
    let n_pre = samples.iter().filter(|(y, _)| *y > bounce_y).count();
    let n_post = samples.len() - n_pre;
    if n_pre < 2 {
        return Err(TrajectoryError::InsufficientSamples {
            side: "pre-bounce",
            needed: 2,
            got: n_pre,
        });
    }
    if n_post < 2 {
        return Err(TrajectoryError::InsufficientSamples {
            side: "post-bounce",
            needed: 2,
            got: n_post,
        });
    }

    let mut design = DMatrix::zeros(samples.len(), 3);
    let mut target = DVector::zeros(samples.len());
    for (row, (y, x)) in samples.iter().enumerate() {
        if *y > bounce_y {
            design[(row, 0)] = *y;
        } else {
            design[(row, 1)] = *y;
        }
        design[(row, 2)] = 1.0;
        target[row] = *x;
    }

    let svd = design.clone().svd(true, true);
    let solution = svd
        .solve(&target, 1e-14)
        .map_err(|e| TrajectoryError::SolveFailed(e.to_string()))?;
    let params = PiecewiseLinearXY::new(solution[0], solution[1], solution[2])?;

    let residual = &design * &solution - &target;
    let rms = (residual.norm_squared() / samples.len() as f64).sqrt();
    Ok(PiecewiseFit {
        params,
        rms_residual: rms,
    })
}

/// Discretized area between two parametrized trajectories.
///
/// Sums |Δx| of the pre-bounce lines over y ∈ {140, 140−step, …, −10} and of
/// the post-bounce lines over y ∈ {−70, …, −140}, endpoints inclusive. The
/// step must divide both ranges.
pub fn trajectory_loss(
    pred: &PiecewiseLinearXY,
    truth: &PiecewiseLinearXY,
    step: f64,
) -> Result<f64, TrajectoryError> {
    if !(step > 0.0) {
        return Err(TrajectoryError::NonPositiveStep(step));
    }
    let count_for = |(start, end): (f64, f64)| -> Result<usize, TrajectoryError> {
        let range = start - end;
        let n = range / step;
        if (n - n.round()).abs() > 1e-9 {
            return Err(TrajectoryError::StepDoesNotDivide { step, range });
        }
        Ok(n.round() as usize)
    };
    let n_pre = count_for(LOSS_PRE_RANGE)?;
    let n_post = count_for(LOSS_POST_RANGE)?;

    let mut loss = 0.0;
    for k in 0..=n_pre {
        let y = LOSS_PRE_RANGE.0 - k as f64 * step;
        loss += (pred.pre_line(y) - truth.pre_line(y)).abs();
    }
    for k in 0..=n_post {
        let y = LOSS_POST_RANGE.0 - k as f64 * step;
        loss += (pred.post_line(y) - truth.post_line(y)).abs();
    }
    Ok(loss)
}
