//! Per-trial outcomes and their aggregation into region/overall tables.

use crate::robot::JointState;
use crate::spatial::Region;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("no trial results supplied")]
    Empty,
    #[error("no region recorded for segment {0}")]
    MissingRegion(String),
    #[error("end distance must be non-negative, got {0}")]
    NegativeDistance(f64),
}

/// Outcome of one interception trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub segment_id: String,
    pub controller_id: String,
    pub hit: bool,
    /// Paddle-center-to-ball distance (cm) at strike-plane crossing.
    pub end_distance_to_goal: f64,
    pub joint_trace: Vec<JointState>,
}

/// Count/hit/distance statistics of one region bucket.
///
/// Distance statistics cover hit trials only; an empty bucket keeps them
/// `None` rather than zero-filling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionStats {
    pub total: usize,
    pub hits: usize,
    pub mean_end_distance: Option<f64>,
    pub half_stddev_end_distance: Option<f64>,
}

impl RegionStats {
    fn from_distances(total: usize, hit_distances: &[f64]) -> Self {
        if hit_distances.is_empty() {
            return Self {
                total,
                hits: 0,
                mean_end_distance: None,
                half_stddev_end_distance: None,
            };
        }
        let n = hit_distances.len() as f64;
        let mean = hit_distances.iter().sum::<f64>() / n;
        let variance = hit_distances
            .iter()
            .map(|d| (d - mean).powi(2))
            .sum::<f64>()
            / n;
        Self {
            total,
            hits: hit_distances.len(),
            mean_end_distance: Some(mean),
            half_stddev_end_distance: Some(0.5 * variance.sqrt()),
        }
    }
}

/// Region rows plus the overall row, mirroring the benchmark table layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsTable {
    pub left: RegionStats,
    pub center: RegionStats,
    pub right: RegionStats,
    pub all: RegionStats,
    /// Convention notes carried into every serialized table.
    pub stddev_convention: String,
}

/// Aggregate trial outcomes into per-region and overall statistics.
///
/// `regions` maps segment id → true strike-point region. Population (divide
/// by n) standard deviation, recorded in the output metadata.
pub fn aggregate_metrics(
    trials: &[TrialResult],
    regions: &BTreeMap<String, Region>,
) -> Result<MetricsTable, MetricsError> {
    if trials.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut totals: BTreeMap<&str, usize> = BTreeMap::new();
    let mut hit_distances: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut all_total = 0usize;
    let mut all_hits = Vec::new();
    for trial in trials {
        if trial.end_distance_to_goal < 0.0 {
            return Err(MetricsError::NegativeDistance(trial.end_distance_to_goal));
        }
        let region = regions
            .get(&trial.segment_id)
            .ok_or_else(|| MetricsError::MissingRegion(trial.segment_id.clone()))?;
        *totals.entry(region.name()).or_default() += 1;
        all_total += 1;
        if trial.hit {
            hit_distances
                .entry(region.name())
                .or_default()
                .push(trial.end_distance_to_goal);
            all_hits.push(trial.end_distance_to_goal);
        }
    }
    let stats = |name: &str| {
        RegionStats::from_distances(
            totals.get(name).copied().unwrap_or(0),
            hit_distances.get(name).map(Vec::as_slice).unwrap_or(&[]),
        )
    };
    Ok(MetricsTable {
        left: stats("left"),
        center: stats("center"),
        right: stats("right"),
        all: RegionStats::from_distances(all_total, &all_hits),
        stddev_convention: "population".into(),
    })
}

/// Median of a sample; even counts average the two central values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    })
}

/// One (segment, prediction frame) strike-error observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrikeErrorSample {
    pub segment_id: String,
    pub region: Region,
    /// Frames before the hit at which the prediction was made.
    pub frame: usize,
    pub abs_error: f64,
}

/// Median absolute strike error per prediction frame, split by region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameErrorRow {
    pub frame: usize,
    pub left: Option<f64>,
    pub center: Option<f64>,
    pub right: Option<f64>,
    pub all: Option<f64>,
}

pub fn median_strike_error_by_frame(samples: &[StrikeErrorSample]) -> Vec<FrameErrorRow> {
    let mut by_frame: BTreeMap<usize, Vec<&StrikeErrorSample>> = BTreeMap::new();
    for sample in samples {
        by_frame.entry(sample.frame).or_default().push(sample);
    }
    by_frame
        .into_iter()
        .map(|(frame, group)| {
            let of_region = |region: Region| {
                let values: Vec<f64> = group
                    .iter()
                    .filter(|s| s.region == region)
                    .map(|s| s.abs_error)
                    .collect();
                median(&values)
            };
            let all: Vec<f64> = group.iter().map(|s| s.abs_error).collect();
            FrameErrorRow {
                frame,
                left: of_region(Region::Left),
                center: of_region(Region::Center),
                right: of_region(Region::Right),
                all: median(&all),
            }
        })
        .collect()
}
