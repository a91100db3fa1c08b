//! Synthetic segment generation: post-hit ball physics expressed in the
//! piecewise-linear model class, a pre-hit swing whose geometry telegraphs
//! the opponent's intent with dialable predictability, validity filtering,
//! and deterministic dataset assembly.

mod dataset;
mod generator;
mod refit;
mod swing;
mod validity;

pub use dataset::{
    config_hash, generate_dataset, load_dataset, save_dataset, segment_region, split_segments,
    DatasetManifest, SplitAssignment, MANIFEST_SCHEMA_VERSION,
};
pub use generator::{
    finalize_candidate, generate_candidate, BallFlight, CandidateFrame, CandidateSegment,
};
pub use refit::refit_truth;
pub use validity::{validity_filter, RejectReason};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("candidate rejected: {0}")]
    Rejected(RejectReason),
    #[error("segment error: {0}")]
    Segment(#[from] crate::segment::SegmentError),
    #[error("trajectory error: {0}")]
    Trajectory(#[from] crate::trajectory::TrajectoryError),
    #[error("geometry error: {0}")]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// What the opponent is trying to do with one hit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpponentIntent {
    /// Where the ball should cross the strike plane (cm).
    pub target_strike_x: f64,
    /// Table contact location, within the plausible band.
    pub bounce_y: f64,
    /// Post-bounce slope change a2 − a1 (spin effect).
    pub spin_delta: f64,
    /// Visual size of the backswing; cosmetic scale of the arm arc.
    pub swing_amplitude: f64,
    /// Observation noise on pre-hit scene positions (cm).
    pub sigma_obs: f64,
}

impl OpponentIntent {
    pub fn validate(&self) -> Result<(), GenError> {
        if !(-70.0..=-10.0).contains(&self.bounce_y) {
            return Err(GenError::InvalidConfig(format!(
                "bounce_y {} outside the plausible band [-70, -10]",
                self.bounce_y
            )));
        }
        if self.sigma_obs < 0.0 {
            return Err(GenError::InvalidConfig("sigma_obs must be ≥ 0".into()));
        }
        Ok(())
    }
}

/// Everything that controls dataset generation. Deterministic given `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Accepted segments to produce.
    pub segment_count: usize,
    /// Relative left/center/right mix of true strike points.
    pub region_weights: [f64; 3],
    /// Correlation strength between the pre-hit scene and the intent:
    /// 0 = independent, 1 = fully telegraphed.
    pub predictability: f64,
    pub gravity: f64,
    /// z restitution of the table bounce.
    pub restitution: f64,
    /// Gaussian noise on stored post-hit ball samples (cm).
    pub ball_noise: f64,
    /// Gaussian noise on pre-hit scene positions (cm).
    pub sigma_obs: f64,
    /// Pre-hit window length; ≥ 40 keeps every prediction row backed by
    /// real history with the default feature window.
    pub pre_hit_frames: usize,
    /// Post-hit y-speed range (cm/s).
    pub ball_speed: (f64, f64),
    pub spin_delta_range: (f64, f64),
    pub bounce_y_range: (f64, f64),
    pub swing_amplitude_range: (f64, f64),
    /// Probability that a pre-hit frame loses its pose (and, independently,
    /// its paddle) observation.
    pub dropout_rate: f64,
    /// Missing-frame fraction above which a candidate is rejected.
    pub dropout_threshold: f64,
    /// Low-pass window applied to accepted pre-hit signals.
    pub filter_window: usize,
    pub split_train: f64,
    pub split_calibration: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            segment_count: 2226,
            region_weights: [0.18, 0.37, 0.45],
            predictability: 1.0,
            gravity: 981.0,
            restitution: 0.9,
            ball_noise: 0.25,
            sigma_obs: 0.5,
            pre_hit_frames: 45,
            ball_speed: (620.0, 860.0),
            spin_delta_range: (-0.06, 0.06),
            bounce_y_range: (-55.0, -18.0),
            swing_amplitude_range: (0.8, 1.2),
            dropout_rate: 0.0,
            dropout_threshold: 0.2,
            filter_window: 5,
            split_train: 0.64,
            split_calibration: 0.16,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.segment_count == 0 {
            return Err(GenError::InvalidConfig("segment_count must be ≥ 1".into()));
        }
        let weight_sum: f64 = self.region_weights.iter().sum();
        if self.region_weights.iter().any(|w| *w < 0.0) || weight_sum <= 0.0 {
            return Err(GenError::InvalidConfig(
                "region weights must be non-negative with a positive sum".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.predictability) {
            return Err(GenError::InvalidConfig(
                "predictability must lie in [0, 1]".into(),
            ));
        }
        if !(self.restitution > 0.0 && self.restitution <= 1.0) {
            return Err(GenError::InvalidConfig(
                "restitution must lie in (0, 1]".into(),
            ));
        }
        if self.ball_noise < 0.0 || self.sigma_obs < 0.0 {
            return Err(GenError::InvalidConfig("noise scales must be ≥ 0".into()));
        }
        if self.pre_hit_frames < 2 {
            return Err(GenError::InvalidConfig("pre_hit_frames must be ≥ 2".into()));
        }
        if !(self.ball_speed.0 > 0.0 && self.ball_speed.1 >= self.ball_speed.0) {
            return Err(GenError::InvalidConfig("bad ball speed range".into()));
        }
        if self.bounce_y_range.0 < -70.0
            || self.bounce_y_range.1 > -10.0
            || self.bounce_y_range.0 > self.bounce_y_range.1
        {
            return Err(GenError::InvalidConfig(
                "bounce_y_range must lie within [-70, -10]".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.dropout_rate)
            || !(0.0..=1.0).contains(&self.dropout_threshold)
        {
            return Err(GenError::InvalidConfig("bad dropout settings".into()));
        }
        if self.filter_window.is_multiple_of(2) || self.filter_window == 0 {
            return Err(GenError::InvalidConfig(
                "filter_window must be odd and ≥ 1".into(),
            ));
        }
        if self.split_train <= 0.0
            || self.split_calibration < 0.0
            || self.split_train + self.split_calibration >= 1.0
        {
            return Err(GenError::InvalidConfig(
                "splits must leave a non-empty test fraction".into(),
            ));
        }
        Ok(())
    }
}

/// Independent per-candidate stream: parallel and serial generation agree.
pub(crate) fn derive_rng(seed: u64, index: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
