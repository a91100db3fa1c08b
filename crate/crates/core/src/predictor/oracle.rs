//! Controlled-error oracle: ground truth plus a seeded, per-row noise
//! schedule. Stands in for a trained sequence model so the causal effect of
//! prediction error on control can be dialed directly.

use super::matrix::{PredictionMatrix, PREDICTION_ROWS};
use super::PredictorError;
use crate::segment::Segment;
use crate::trajectory::PiecewiseLinearXY;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Noise grows affinely with the prediction horizon:
/// σ(row) = sigma_intercept + sigma_slope·row, in cm of strike-point error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyOracle {
    pub sigma_intercept: f64,
    pub sigma_slope: f64,
    /// Scale of the slope perturbations relative to σ(row).
    pub slope_noise: f64,
    pub seed: u64,
    /// Constant shift (cm) applied to every predicted strike point.
    pub bias: f64,
}

impl NoisyOracle {
    pub fn exact() -> Self {
        Self {
            sigma_intercept: 0.0,
            sigma_slope: 0.0,
            slope_noise: 0.0,
            seed: 0,
            bias: 0.0,
        }
    }

    pub fn linear(sigma_slope: f64, seed: u64) -> Self {
        Self {
            sigma_intercept: 0.0,
            sigma_slope,
            slope_noise: 1.0 / 400.0,
            seed,
            bias: 0.0,
        }
    }

    pub fn sigma(&self, row: usize) -> f64 {
        self.sigma_intercept + self.sigma_slope * row as f64
    }

    /// Truth plus noise. The b perturbation is correlated with the a2
    /// perturbation so the strike-point error at y = −140 is exactly
    /// N(bias, σ(row)²), making the error schedule precise by construction.
    pub fn predict(&self, segment: &Segment) -> Result<PredictionMatrix, PredictorError> {
        if self.sigma_intercept < 0.0 || self.sigma_slope < 0.0 {
            return Err(PredictorError::NegativeSigma);
        }
        let truth = segment.truth_params;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(segment.id.as_bytes()));
        let unit = Normal::new(0.0, 1.0).expect("unit normal");
        let rows = (0..PREDICTION_ROWS)
            .map(|row| {
                let sigma = self.sigma(row);
                let da1 = unit.sample(&mut rng) * sigma * self.slope_noise;
                let da2 = unit.sample(&mut rng) * sigma * self.slope_noise;
                let strike_err = unit.sample(&mut rng) * sigma + self.bias;
                // strike_x lives at y = -140: Δstrike = -140·Δa2 + Δb
                let db = strike_err + 140.0 * da2;
                PiecewiseLinearXY::new(truth.a1 + da1, truth.a2 + da2, truth.b + db)
                    .map_err(|_| PredictorError::NonFinite)
            })
            .collect::<Result<Vec<_>, _>>()?;
        PredictionMatrix::new(rows)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in bytes {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    hash
}
