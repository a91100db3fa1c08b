//! Split conformal prediction intervals.
//!
//! Nonconformity score: absolute strike-point error (cm) on a held-out
//! calibration split. The interval half-width is the ⌈(n+1)(1−α)⌉-th
//! smallest calibration score, which carries the usual distribution-free
//! marginal coverage guarantee P(truth ∈ interval) ≥ 1−α under
//! exchangeability.

use super::UncertaintyError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalCalibration {
    /// Sorted ascending.
    scores: Vec<f64>,
    /// Miscoverage α.
    alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalInterval {
    pub lo: f64,
    pub hi: f64,
    pub half_width: f64,
    /// Set when the quantile index exceeds the calibration size, which
    /// makes the interval unbounded.
    pub infinite: bool,
}

impl ConformalCalibration {
    pub fn new(mut scores: Vec<f64>, alpha: f64) -> Result<Self, UncertaintyError> {
        if scores.is_empty() {
            return Err(UncertaintyError::EmptyCalibration);
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(UncertaintyError::BadAlpha(alpha));
        }
        scores.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { scores, alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// The ⌈(n+1)(1−α)⌉-th smallest score, or +∞ when the index exceeds n.
    pub fn quantile(&self) -> f64 {
        let n = self.scores.len();
        let raw = (n as f64 + 1.0) * (1.0 - self.alpha);
        // guard against float fuzz pushing an exact integer over its ceiling
        let k = (raw - 1e-9).ceil().max(1.0) as usize;
        if k > n {
            f64::INFINITY
        } else {
            self.scores[k - 1]
        }
    }

    pub fn interval(&self, point_prediction: f64) -> ConformalInterval {
        let q = self.quantile();
        ConformalInterval {
            lo: point_prediction - q,
            hi: point_prediction + q,
            half_width: q,
            infinite: q.is_infinite(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn quantile_formula_examples() {
        let cal = ConformalCalibration::new((1..=9).map(|v| v as f64).collect(), 0.1).unwrap();
        // ⌈10·0.9⌉ = 9 → the 9th smallest of {1..9}
        assert_eq!(cal.quantile(), 9.0);

        let single = ConformalCalibration::new(vec![5.0], 0.5).unwrap();
        // ⌈2·0.5⌉ = 1 → the only score
        assert_eq!(single.quantile(), 5.0);
        let interval = single.interval(10.0);
        assert_eq!((interval.lo, interval.hi), (5.0, 15.0));
        assert!(!interval.infinite);
    }

    #[test]
    fn small_calibration_blows_up_to_infinity() {
        // ⌈2·0.9⌉ = 2 > n = 1
        let cal = ConformalCalibration::new(vec![5.0], 0.1).unwrap();
        assert!(cal.quantile().is_infinite());
        assert!(cal.interval(0.0).infinite);
    }

    #[test]
    fn width_is_monotone_in_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let scores: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..50.0)).collect();
        let mut last = f64::INFINITY;
        for alpha in [0.05, 0.1, 0.2, 0.4, 0.8] {
            let cal = ConformalCalibration::new(scores.clone(), alpha).unwrap();
            assert!(cal.quantile() <= last);
            last = cal.quantile();
        }
    }

    #[test]
    fn empirical_coverage_meets_the_guarantee() {
        // exchangeable draws: score = |N(0, 10)|; 2000 calibration/test trials
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let noise: Normal<f64> = Normal::new(0.0, 10.0).unwrap();
        for alpha in [0.1, 0.2] {
            let mut covered = 0usize;
            let trials = 2000usize;
            for _ in 0..trials {
                let scores: Vec<f64> = (0..120).map(|_| noise.sample(&mut rng).abs()).collect();
                let cal = ConformalCalibration::new(scores, alpha).unwrap();
                let truth_error: f64 = noise.sample(&mut rng).abs();
                if truth_error <= cal.quantile() {
                    covered += 1;
                }
            }
            let coverage = covered as f64 / trials as f64;
            assert!(
                coverage >= 1.0 - alpha - 0.03,
                "coverage {coverage} below the α = {alpha} guarantee"
            );
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(ConformalCalibration::new(vec![], 0.1).is_err());
        assert!(ConformalCalibration::new(vec![1.0], 0.0).is_err());
        assert!(ConformalCalibration::new(vec![1.0], 1.0).is_err());
    }
}
