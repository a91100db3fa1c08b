//! Multiview projection, DLT triangulation, and signal filtering.

mod camera;
mod filter;
mod triangulate;

pub use camera::{CameraModel, CameraRig, PixelObservation, RIG_SCHEMA_VERSION};
pub use filter::lowpass_filter;
pub use triangulate::{triangulate_dlt, Triangulation};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("projection matrix must have rank 3")]
    RankDeficientCamera,
    #[error("point has non-positive depth {0:.3e} in front of the camera")]
    NonPositiveDepth(f64),
    #[error("pixel ({u:.1}, {v:.1}) outside image bounds {width}x{height}")]
    OutsideImage {
        u: f64,
        v: f64,
        width: u32,
        height: u32,
    },
    #[error("need at least 2 observations, got {0}")]
    TooFewViews(usize),
    #[error("observation references unknown camera {0}")]
    UnknownCamera(usize),
    #[error("degenerate geometry: DLT system has rank < 3 (condition {0:.3e})")]
    DegenerateGeometry(f64),
    #[error("triangulated point lies at infinity")]
    PointAtInfinity,
    #[error("filter window must be odd and within the signal length, got window {window} for length {len}")]
    BadWindow { window: usize, len: usize },
    #[error("signal must not be empty")]
    EmptySignal,
    #[error("config error: {0}")]
    Config(String),
}
