//! Batch evaluation: every policy sees the identical segment list.

use super::config::SimConfig;
use super::trial::{run_trial, ControllerPolicy, TrialOutput};
use super::SimError;
use crate::metrics::{aggregate_metrics, MetricsTable, TrialResult};
use crate::predictor::PredictorModel;
use crate::robot::{JointLimits, KinematicChain};
use crate::segment::Segment;
use crate::spatial::TableGeometry;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Chain plus limits, bundled because they always travel together.
#[derive(Debug, Clone)]
pub struct RobotSetup {
    pub chain: KinematicChain,
    pub limits: JointLimits,
}

impl RobotSetup {
    pub fn standard() -> Self {
        Self {
            chain: KinematicChain::standard(),
            limits: JointLimits::table_defaults(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkOutcome {
    pub policy: ControllerPolicy,
    pub table: MetricsTable,
    pub trials: Vec<TrialResult>,
    /// Per-segment trial failures, recorded rather than fatal.
    pub errors: Vec<(String, String)>,
    /// Full per-trial outputs for trace audits.
    pub outputs: Vec<TrialOutput>,
}

pub fn run_benchmark(
    segments: &[Segment],
    policies: &[ControllerPolicy],
    predictor: Option<&PredictorModel>,
    robot: &RobotSetup,
    table: &TableGeometry,
    config: &SimConfig,
) -> Result<Vec<BenchmarkOutcome>, SimError> {
    if segments.is_empty() {
        return Err(SimError::Empty("no segments to benchmark".into()));
    }
    if policies.is_empty() {
        return Err(SimError::Empty("no policies to benchmark".into()));
    }
    let regions: BTreeMap<String, crate::spatial::Region> = segments
        .iter()
        .map(|s| {
            table
                .region_of(s.strike_point.x)
                .map(|r| (s.id.clone(), r))
                .map_err(|e| SimError::InvalidConfig(e.to_string()))
        })
        .collect::<Result<_, _>>()?;

    policies
        .iter()
        .map(|policy| {
            let results: Vec<Result<TrialOutput, SimError>> = segments
                .par_iter()
                .map(|segment| {
                    run_trial(
                        segment,
                        policy,
                        predictor,
                        &robot.chain,
                        &robot.limits,
                        table,
                        config,
                    )
                })
                .collect();
            let mut trials = Vec::with_capacity(segments.len());
            let mut outputs = Vec::with_capacity(segments.len());
            let mut errors = Vec::new();
            for (segment, outcome) in segments.iter().zip(results) {
                match outcome {
                    Ok(output) => {
                        trials.push(output.result.clone());
                        outputs.push(output);
                    }
                    Err(err) => errors.push((segment.id.clone(), err.to_string())),
                }
            }
            if trials.is_empty() {
                return Err(SimError::Empty(format!(
                    "every trial failed for policy '{}'",
                    policy.id
                )));
            }
            let table = aggregate_metrics(&trials, &regions)?;
            Ok(BenchmarkOutcome {
                policy: policy.clone(),
                table,
                trials,
                errors,
                outputs,
            })
        })
        .collect()
}
