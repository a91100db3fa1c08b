//! Table-centered spatial conventions, table geometry, and region logic.
//!
//! The world frame sits at the table center: x runs across the table width,
//! y along its length with the opponent on the +y side, z points up and the
//! table surface is at z = 0. All lengths are centimeters, all times seconds.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpatialError {
    #[error("coordinate must be finite, got {0}")]
    NonFinite(f64),
    #[error("invalid table geometry: {0}")]
    InvalidGeometry(String),
}

/// Right-handed world frame at the table center.
///
/// Exists mostly as documentation of the axis convention; the unit axes are
/// exposed for code that wants to be explicit about directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpatialFrame;

impl SpatialFrame {
    /// Across the table width.
    pub const X_AXIS: [f64; 3] = [1.0, 0.0, 0.0];
    /// Along the table length, opponent on +y.
    pub const Y_AXIS: [f64; 3] = [0.0, 1.0, 0.0];
    /// Up; table surface at z = 0.
    pub const Z_AXIS: [f64; 3] = [0.0, 0.0, 1.0];
}

/// Table dimensions plus the strike plane and region boundary, in cm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableGeometry {
    pub width: f64,
    pub length: f64,
    /// The robot-side plane where interception is scored.
    pub strike_plane_y: f64,
    /// |x| beyond which a strike point counts as Left/Right.
    pub region_boundary: f64,
}

impl Default for TableGeometry {
    fn default() -> Self {
        Self {
            width: 152.5,
            length: 274.0,
            strike_plane_y: -140.0,
            region_boundary: 25.0,
        }
    }
}

impl TableGeometry {
    pub fn validate(&self) -> Result<(), SpatialError> {
        if !(self.width > 0.0 && self.length > 0.0) {
            return Err(SpatialError::InvalidGeometry(
                "width and length must be positive".into(),
            ));
        }
        if self.strike_plane_y >= -self.length / 2.0 {
            return Err(SpatialError::InvalidGeometry(format!(
                "strike plane y {} must lie behind the table edge {}",
                self.strike_plane_y,
                -self.length / 2.0
            )));
        }
        if self.region_boundary <= 0.0 {
            return Err(SpatialError::InvalidGeometry(
                "region boundary must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn region_of(&self, x: f64) -> Result<Region, SpatialError> {
        classify_region_with(x, self.region_boundary)
    }
}

/// Lateral table region of a strike point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Left,
    Center,
    Right,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::Left => "left",
            Region::Center => "center",
            Region::Right => "right",
        }
    }
}

/// Classify an x coordinate with the default ±25 cm boundary.
///
/// Boundaries map to Center so anticipatory motion stays conservative at ties.
pub fn classify_region(x: f64) -> Result<Region, SpatialError> {
    classify_region_with(x, TableGeometry::default().region_boundary)
}

pub fn classify_region_with(x: f64, boundary: f64) -> Result<Region, SpatialError> {
    if !x.is_finite() {
        return Err(SpatialError::NonFinite(x));
    }
    if x < -boundary {
        Ok(Region::Left)
    } else if x > boundary {
        Ok(Region::Right)
    } else {
        Ok(Region::Center)
    }
}
