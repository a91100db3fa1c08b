//! Exhaustive (α₁, α₂) grid evaluation on a calibration split.

use super::benchmark::{run_benchmark, RobotSetup};
use super::config::SimConfig;
use super::trial::ControllerPolicy;
use super::SimError;
use crate::predictor::PredictorModel;
use crate::segment::Segment;
use crate::spatial::TableGeometry;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub alpha1: f64,
    pub alpha2: f64,
    pub hits: usize,
    pub mean_end_distance: Option<f64>,
}

/// Evaluate every grid cell and pick the best operating point: most hits,
/// ties broken by lower mean end distance, then lower α₁, then lower α₂.
pub fn sweep_alphas(
    calibration: &[Segment],
    template: &ControllerPolicy,
    alpha1_grid: &[f64],
    alpha2_grid: &[f64],
    predictor: Option<&PredictorModel>,
    robot: &RobotSetup,
    table: &TableGeometry,
    config: &SimConfig,
) -> Result<((f64, f64), Vec<SweepCell>), SimError> {
    if calibration.is_empty() {
        return Err(SimError::Empty("empty calibration set".into()));
    }
    if alpha1_grid.is_empty() || alpha2_grid.is_empty() {
        return Err(SimError::Empty("empty sweep grid".into()));
    }
    let mut cells = Vec::with_capacity(alpha1_grid.len() * alpha2_grid.len());
    for &alpha1 in alpha1_grid {
        for &alpha2 in alpha2_grid {
            let policy = ControllerPolicy {
                id: format!("{}@a1={alpha1:.2},a2={alpha2:.2}", template.id),
                kind: template.kind,
                alpha1,
                alpha2,
            };
            let outcome = run_benchmark(calibration, &[policy], predictor, robot, table, config)?
                .pop()
                .expect("one policy in, one outcome out");
            cells.push(SweepCell {
                alpha1,
                alpha2,
                hits: outcome.table.all.hits,
                mean_end_distance: outcome.table.all.mean_end_distance,
            });
        }
    }
    let best = cells
        .iter()
        .min_by(|a, b| {
            b.hits
                .cmp(&a.hits)
                .then(
                    a.mean_end_distance
                        .unwrap_or(f64::INFINITY)
                        .partial_cmp(&b.mean_end_distance.unwrap_or(f64::INFINITY))
                        .unwrap(),
                )
                .then(a.alpha1.partial_cmp(&b.alpha1).unwrap())
                .then(a.alpha2.partial_cmp(&b.alpha2).unwrap())
        })
        .expect("grid is non-empty");
    Ok(((best.alpha1, best.alpha2), cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictor::{NoisyOracle, PredictorModel};
    use crate::simgen::{generate_dataset, GeneratorConfig};

    #[test]
    fn single_cell_grid_returns_that_cell() {
        let config = GeneratorConfig {
            segment_count: 10,
            seed: 3,
            ..GeneratorConfig::default()
        };
        let (segments, _) = generate_dataset(&config).unwrap();
        let oracle = PredictorModel::NoisyOracle(NoisyOracle::exact());
        let ((a1, a2), cells) = sweep_alphas(
            &segments,
            &ControllerPolicy::anticipatory(0.0, 0.0),
            &[0.4],
            &[0.7],
            Some(&oracle),
            &RobotSetup::standard(),
            &TableGeometry::default(),
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!((a1, a2), (0.4, 0.7));
        assert_eq!(cells.len(), 1);
    }

    #[test]
    fn empty_calibration_rejected() {
        let oracle = PredictorModel::NoisyOracle(NoisyOracle::exact());
        assert!(matches!(
            sweep_alphas(
                &[],
                &ControllerPolicy::anticipatory(0.0, 0.0),
                &[0.5],
                &[0.5],
                Some(&oracle),
                &RobotSetup::standard(),
                &TableGeometry::default(),
                &SimConfig::default(),
            ),
            Err(SimError::Empty(_))
        ));
    }
}
