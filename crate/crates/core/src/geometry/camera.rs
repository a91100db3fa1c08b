//! Pinhole camera model with a 3×4 projection matrix.

use super::GeometryError;
use nalgebra::{SMatrix, Vector3, Vector4};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const RIG_SCHEMA_VERSION: u32 = 1;

pub type ProjectionMatrix = SMatrix<f64, 3, 4>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    /// Rows of the 3×4 projection matrix.
    pub projection: [[f64; 4]; 3],
    pub image_size: (u32, u32),
}

impl CameraModel {
    pub fn new(projection: [[f64; 4]; 3], image_size: (u32, u32)) -> Result<Self, GeometryError> {
        let camera = Self {
            projection,
            image_size,
        };
        camera.validate()?;
        Ok(camera)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let svd = self.matrix().svd(false, false);
        let max = svd.singular_values.max();
        if svd.singular_values[2] <= 1e-12 * max {
            return Err(GeometryError::RankDeficientCamera);
        }
        Ok(())
    }

    pub fn matrix(&self) -> ProjectionMatrix {
        ProjectionMatrix::from_fn(|i, j| self.projection[i][j])
    }

    /// Homogeneous projection U = P·X̃ normalized by the third coordinate.
    /// Points at or behind the camera plane are rejected.
    pub fn project(&self, point: &Vector3<f64>) -> Result<(f64, f64), GeometryError> {
        let p = self.matrix();
        let homogeneous = Vector4::new(point.x, point.y, point.z, 1.0);
        let projected = p * homogeneous;
        let depth = projected[2];
        if depth <= 1e-12 {
            return Err(GeometryError::NonPositiveDepth(depth));
        }
        Ok((projected[0] / depth, projected[1] / depth))
    }
}

/// One detected pixel in one camera at one frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelObservation {
    pub camera_id: usize,
    pub u: f64,
    pub v: f64,
    pub frame: usize,
}

impl PixelObservation {
    /// Validated constructor: pixel must land inside the camera's image.
    pub fn new(
        camera_id: usize,
        camera: &CameraModel,
        u: f64,
        v: f64,
        frame: usize,
    ) -> Result<Self, GeometryError> {
        let (width, height) = camera.image_size;
        if !(0.0..=width as f64).contains(&u) || !(0.0..=height as f64).contains(&v) {
            return Err(GeometryError::OutsideImage {
                u,
                v,
                width,
                height,
            });
        }
        Ok(Self {
            camera_id,
            u,
            v,
            frame,
        })
    }
}

/// Versioned camera rig configuration: projection matrices + image sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraRig {
    pub version: u32,
    pub cameras: Vec<CameraModel>,
}

impl CameraRig {
    pub fn from_path(path: &Path) -> Result<Self, GeometryError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| GeometryError::Config(e.to_string()))?;
        let rig: Self =
            serde_json::from_str(&text).map_err(|e| GeometryError::Config(e.to_string()))?;
        if rig.version != RIG_SCHEMA_VERSION {
            return Err(GeometryError::Config(format!(
                "unsupported rig schema version {}",
                rig.version
            )));
        }
        for camera in &rig.cameras {
            camera.validate()?;
        }
        Ok(rig)
    }

    pub fn save(&self, path: &Path) -> Result<(), GeometryError> {
        let json =
            serde_json::to_string_pretty(self).map_err(|e| GeometryError::Config(e.to_string()))?;
        std::fs::write(path, json).map_err(|e| GeometryError::Config(e.to_string()))
    }
}
