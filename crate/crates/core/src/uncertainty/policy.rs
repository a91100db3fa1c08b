//! Confidence → commanded-speed-fraction map per controller policy.

use crate::spatial::Region;
use serde::{Deserialize, Serialize};

/// How a controller turns predictions into pre-hit motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    /// Visual servoing only; no pre-hit motion.
    Baseline,
    /// Always chase the anticipatory prediction.
    BasicAnticipatory,
    /// Chase it only when the predicted strike point leaves the center
    /// region, where mispredictions cluster.
    UncertaintyAware,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Commands issued before the hit (t < 0).
    PreHit,
    /// The command issued at the hit (t = 0).
    AtHit,
}

/// Speed fraction α ∈ [0, 1] for a prediction-driven goal.
pub fn confidence_to_alpha(
    policy: AlphaPolicy,
    phase: Phase,
    predicted_region: Region,
    alpha1: f64,
    alpha2: f64,
) -> f64 {
    match (policy, phase) {
        (AlphaPolicy::Baseline, _) => 0.0,
        (AlphaPolicy::BasicAnticipatory, Phase::PreHit) => alpha1,
        (AlphaPolicy::BasicAnticipatory, Phase::AtHit) => alpha2,
        (AlphaPolicy::UncertaintyAware, Phase::PreHit) => {
            if predicted_region == Region::Center {
                0.0
            } else {
                alpha1
            }
        }
        (AlphaPolicy::UncertaintyAware, Phase::AtHit) => alpha2,
    }
}

/// Continuous variant: speed proportional to a confidence in [0, 1].
pub fn continuous_alpha(confidence: f64, alpha_max: f64) -> f64 {
    confidence.clamp(0.0, 1.0) * alpha_max.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_gating() {
        // predicted x = 10 → Center → uncertainty-aware stays put pre-hit
        let alpha = confidence_to_alpha(
            AlphaPolicy::UncertaintyAware,
            Phase::PreHit,
            Region::Center,
            0.6,
            1.0,
        );
        assert_eq!(alpha, 0.0);
        // predicted x = 50 → Right → moves at α1 = 0.6
        let alpha = confidence_to_alpha(
            AlphaPolicy::UncertaintyAware,
            Phase::PreHit,
            Region::Right,
            0.6,
            1.0,
        );
        assert_eq!(alpha, 0.6);
        // at the hit, gating is lifted
        let alpha = confidence_to_alpha(
            AlphaPolicy::UncertaintyAware,
            Phase::AtHit,
            Region::Center,
            0.6,
            1.0,
        );
        assert_eq!(alpha, 1.0);
    }

    #[test]
    fn basic_policy_ignores_region() {
        for region in [Region::Left, Region::Center, Region::Right] {
            assert_eq!(
                confidence_to_alpha(
                    AlphaPolicy::BasicAnticipatory,
                    Phase::PreHit,
                    region,
                    1.0,
                    1.0
                ),
                1.0
            );
        }
    }

    #[test]
    fn baseline_never_moves_prehit() {
        for phase in [Phase::PreHit, Phase::AtHit] {
            assert_eq!(
                confidence_to_alpha(AlphaPolicy::Baseline, phase, Region::Left, 0.6, 1.0),
                0.0
            );
        }
    }

    #[test]
    fn uncertainty_aware_never_exceeds_basic() {
        for region in [Region::Left, Region::Center, Region::Right] {
            for phase in [Phase::PreHit, Phase::AtHit] {
                let ua =
                    confidence_to_alpha(AlphaPolicy::UncertaintyAware, phase, region, 0.6, 1.0);
                let basic =
                    confidence_to_alpha(AlphaPolicy::BasicAnticipatory, phase, region, 0.6, 1.0);
                assert!(ua <= basic);
                assert!((0.0..=1.0).contains(&ua));
            }
        }
    }

    #[test]
    fn continuous_scaling() {
        assert_eq!(continuous_alpha(0.5, 0.8), 0.4);
        assert_eq!(continuous_alpha(2.0, 0.8), 0.8);
        assert_eq!(continuous_alpha(-1.0, 0.8), 0.0);
    }
}
