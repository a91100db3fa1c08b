//! Simulation protocol constants.

use super::SimError;
use serde::{Deserialize, Serialize};

/// Timing and scoring parameters of the trial loop. Times are in 100 Hz
/// timesteps with t = 0 at the opponent's hit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Goal configurations update once every this many timesteps (10 Hz).
    pub command_period: usize,
    /// Observation latency: a command issued at step t may only use
    /// observations with index ≤ t − latency.
    pub latency: usize,
    /// First timestep at which servoing goals are issued.
    pub servo_start: i32,
    /// First (and, unless `continuous_prehit`, only) pre-hit command step.
    pub anticipatory_start: i32,
    /// A crossing within this distance of the paddle center counts as a hit.
    pub paddle_radius: f64,
    /// Anticipatory goals target this height; z stays unmodeled pre-hit.
    pub pre_hit_z_goal: f64,
    /// Workspace speed requested from the controller before scaling; set
    /// well above any achievable paddle speed so β saturates the envelope.
    pub nominal_speed: f64,
    /// Proportional gain (1/s) of the closed-loop Cartesian law: the
    /// requested workspace speed is min(nominal_speed, gain·distance).
    pub approach_gain: f64,
    /// Issue anticipatory commands at every pre-hit boundary instead of
    /// only at `anticipatory_start`.
    pub continuous_prehit: bool,
    /// Minimum observed samples before a servo fit is attempted.
    pub min_servo_samples: usize,
    /// Bounce-detection threshold on the z signal.
    pub ball_radius: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            command_period: 10,
            latency: 10,
            servo_start: 10,
            anticipatory_start: -10,
            paddle_radius: 8.0,
            pre_hit_z_goal: 20.0,
            nominal_speed: 1000.0,
            approach_gain: 5.0,
            continuous_prehit: false,
            min_servo_samples: 3,
            ball_radius: 2.0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.command_period == 0 {
            return Err(SimError::InvalidConfig("command_period must be ≥ 1".into()));
        }
        if self.anticipatory_start >= 0 {
            return Err(SimError::InvalidConfig(
                "anticipatory_start must be negative".into(),
            ));
        }
        if self.anticipatory_start % self.command_period as i32 != 0 {
            return Err(SimError::InvalidConfig(
                "anticipatory_start must align with the command period".into(),
            ));
        }
        if self.servo_start <= 0 || self.servo_start % self.command_period as i32 != 0 {
            return Err(SimError::InvalidConfig(
                "servo_start must be a positive multiple of the command period".into(),
            ));
        }
        if !(self.paddle_radius > 0.0) {
            return Err(SimError::InvalidConfig("paddle_radius must be > 0".into()));
        }
        if !(self.nominal_speed > 0.0) {
            return Err(SimError::InvalidConfig("nominal_speed must be > 0".into()));
        }
        if !(self.approach_gain > 0.0) {
            return Err(SimError::InvalidConfig("approach_gain must be > 0".into()));
        }
        if self.min_servo_samples < 3 {
            return Err(SimError::InvalidConfig(
                "servo fits need at least 3 samples".into(),
            ));
        }
        Ok(())
    }

    pub fn command_dt(&self) -> f64 {
        self.command_period as f64 * 0.01
    }
}
