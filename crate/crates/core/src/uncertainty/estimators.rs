//! Per-prediction confidence proxies: kNN error regression, ensemble
//! strike-point spread, and time-to-hit confidence.

use super::UncertaintyError;
use crate::predictor::KnnRegressor;
use crate::trajectory::PiecewiseLinearXY;
use serde::{Deserialize, Serialize};

/// Squash a raw uncertainty (cm) into a confidence in (0, 1].
pub fn error_to_confidence(uncertainty: f64) -> f64 {
    1.0 / (1.0 + uncertainty.max(0.0))
}

/// kNN regression of absolute strike error as a function of the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnErrorModel {
    pub regressor: KnnRegressor,
}

impl KnnErrorModel {
    /// Fit on (features, |strike error| cm) pairs.
    pub fn fit(data: &[(Vec<f64>, f64)], k: usize) -> Result<Self, UncertaintyError> {
        let pairs: Vec<(Vec<f64>, Vec<f64>)> =
            data.iter().map(|(f, e)| (f.clone(), vec![*e])).collect();
        Ok(Self {
            regressor: KnnRegressor::fit(&pairs, k)?,
        })
    }

    /// Predicted mean absolute strike error (cm).
    pub fn predict_error(&self, features: &[f64]) -> Result<f64, UncertaintyError> {
        Ok(self.regressor.predict(features)?[0])
    }

    pub fn confidence(&self, features: &[f64]) -> Result<f64, UncertaintyError> {
        Ok(error_to_confidence(self.predict_error(features)?))
    }
}

/// Spread of the strike point implied by ensemble members, computed
/// directly as the population stddev of per-member strike points rather
/// than by linearizing through the parameters.
pub fn ensemble_strike_stddev(
    member_params: &[PiecewiseLinearXY],
    strike_plane_y: f64,
) -> Result<f64, UncertaintyError> {
    if member_params.len() < 2 {
        return Err(UncertaintyError::TooFewMembers {
            needed: 2,
            got: member_params.len(),
        });
    }
    let strikes: Vec<f64> = member_params
        .iter()
        .map(|p| p.strike_x(strike_plane_y))
        .collect();
    let n = strikes.len() as f64;
    let mean = strikes.iter().sum::<f64>() / n;
    let var = strikes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    Ok(var.sqrt())
}

/// Confidence inversely proportional to the time-to-hit:
/// c(i) = 1 / (1 + κ·i), so c(0) = 1 exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeToHitConfidence {
    pub kappa: f64,
}

impl TimeToHitConfidence {
    pub fn confidence(&self, prehit_frames: f64) -> Result<f64, UncertaintyError> {
        if !(prehit_frames >= 0.0) {
            return Err(UncertaintyError::NegativeTimestep(prehit_frames));
        }
        Ok(1.0 / (1.0 + self.kappa * prehit_frames))
    }
}

/// Calibrate κ from per-frame median errors by inverting the straight-line
/// trend: fit m(i) ≈ m0 + s·i and take κ = s / m0.
pub fn fit_kappa(median_errors: &[(f64, f64)]) -> Result<f64, UncertaintyError> {
    if median_errors.len() < 2 {
        return Err(UncertaintyError::Calibration(
            "need at least two (frame, median error) points".into(),
        ));
    }
    let n = median_errors.len() as f64;
    let mean_x = median_errors.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = median_errors.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx = median_errors
        .iter()
        .map(|(x, _)| (x - mean_x).powi(2))
        .sum::<f64>();
    let sxy = median_errors
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum::<f64>();
    if sxx <= 0.0 {
        return Err(UncertaintyError::Calibration(
            "frame values are all identical".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    if intercept <= 1e-9 {
        return Err(UncertaintyError::Calibration(format!(
            "non-positive intercept {intercept:.3e}; error trend cannot be inverted"
        )));
    }
    Ok((slope / intercept).max(0.0))
}
