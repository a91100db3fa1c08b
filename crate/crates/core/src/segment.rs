//! A validated pre-hit/post-hit recording and its JSON schema.
//!
//! One JSON document per segment; the directory-of-files dataset layout is
//! handled by `simgen::dataset`.

use crate::spatial::TableGeometry;
use crate::state::GameState;
use crate::trajectory::PiecewiseLinearXY;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

pub const SEGMENT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("unsupported segment schema version {0}")]
    UnsupportedVersion(u32),
    #[error("frames are not sorted by timestep")]
    UnsortedFrames,
    #[error("hit_index {0} out of range or not at timestep 0")]
    BadHitIndex(usize),
    #[error("truth params evaluate to x={params_x:.6} at the strike plane but strike_point.x={strike_x:.6} (tolerance {tol:.1e})")]
    InconsistentStrike {
        params_x: f64,
        strike_x: f64,
        tol: f64,
    },
    #[error("post-hit ball path never crosses the strike plane")]
    NoStrikeCrossing,
    #[error("frame validation failed: {0}")]
    State(#[from] crate::state::StateError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// (x, z) of the ball when it crosses the strike plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrikePoint {
    pub x: f64,
    pub z: f64,
}

/// One validated exchange: pre-hit frames, post-hit ball path, ground-truth
/// trajectory parameters and strike point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub version: u32,
    pub id: String,
    pub frames: Vec<GameState>,
    pub post_hit_ball: Vec<[f64; 3]>,
    pub hit_index: usize,
    pub truth_params: PiecewiseLinearXY,
    pub strike_point: StrikePoint,
    /// Consistency tolerance between `truth_params` and `strike_point`,
    /// recorded at construction.
    pub fit_tolerance: f64,
}

impl Segment {
    pub fn validate(&self, table: &TableGeometry) -> Result<(), SegmentError> {
        if self.version != SEGMENT_SCHEMA_VERSION {
            return Err(SegmentError::UnsupportedVersion(self.version));
        }
        if self
            .frames
            .windows(2)
            .any(|w| w[0].timestep >= w[1].timestep)
        {
            return Err(SegmentError::UnsortedFrames);
        }
        match self.frames.get(self.hit_index) {
            Some(f) if f.timestep == 0 => {}
            _ => return Err(SegmentError::BadHitIndex(self.hit_index)),
        }
        for frame in &self.frames {
            frame.validate()?;
        }
        let params_x = self.truth_params.strike_x(table.strike_plane_y);
        if (params_x - self.strike_point.x).abs() > self.fit_tolerance {
            return Err(SegmentError::InconsistentStrike {
                params_x,
                strike_x: self.strike_point.x,
                tol: self.fit_tolerance,
            });
        }
        if self.crossing_time(table.strike_plane_y).is_none() {
            return Err(SegmentError::NoStrikeCrossing);
        }
        Ok(())
    }

    /// Pre-hit frames only (timestep ≤ 0), the predictor's input series.
    pub fn pre_hit_frames(&self) -> &[GameState] {
        &self.frames[..=self.hit_index.min(self.frames.len() - 1)]
    }

    /// Time (s, t=0 at hit) when the post-hit ball first crosses the strike
    /// plane, linearly interpolated between 100 Hz samples.
    pub fn crossing_time(&self, strike_plane_y: f64) -> Option<f64> {
        let dt = 0.01;
        for (i, pair) in self.post_hit_ball.windows(2).enumerate() {
            let (y0, y1) = (pair[0][1], pair[1][1]);
            if y0 > strike_plane_y && y1 <= strike_plane_y {
                let frac = (y0 - strike_plane_y) / (y0 - y1);
                return Some((i as f64 + frac) * dt);
            }
        }
        None
    }

    /// Ball position at a post-hit time, interpolating the replayed path.
    pub fn ball_at(&self, t: f64) -> Option<[f64; 3]> {
        if self.post_hit_ball.is_empty() || t < 0.0 {
            return None;
        }
        let pos = t / 0.01;
        let i = pos.floor() as usize;
        if i + 1 >= self.post_hit_ball.len() {
            return self.post_hit_ball.last().copied();
        }
        let frac = pos - i as f64;
        let a = self.post_hit_ball[i];
        let b = self.post_hit_ball[i + 1];
        Some([
            a[0] + frac * (b[0] - a[0]),
            a[1] + frac * (b[1] - a[1]),
            a[2] + frac * (b[2] - a[2]),
        ])
    }

    pub fn to_json(&self) -> Result<String, SegmentError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str, table: &TableGeometry) -> Result<Self, SegmentError> {
        let segment: Segment = serde_json::from_str(json)?;
        segment.validate(table)?;
        Ok(segment)
    }

    pub fn save(&self, path: &Path) -> Result<(), SegmentError> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path, table: &TableGeometry) -> Result<Self, SegmentError> {
        Self::from_json(&std::fs::read_to_string(path)?, table)
    }
}
