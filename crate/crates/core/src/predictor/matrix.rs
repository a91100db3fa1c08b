//! The 30-row prediction output shape.

use super::PredictorError;
use crate::trajectory::PiecewiseLinearXY;
use serde::{Deserialize, Serialize};

/// Predictions exist for 0 to 29 frames before the hit.
pub const PREDICTION_ROWS: usize = 30;

/// Per-frame trajectory parameters: row i is the prediction made i frames
/// before the hit, so a goal issued at pre-hit timestep t reads row |t|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionMatrix {
    rows: Vec<PiecewiseLinearXY>,
}

impl PredictionMatrix {
    pub fn new(rows: Vec<PiecewiseLinearXY>) -> Result<Self, PredictorError> {
        if rows.len() != PREDICTION_ROWS {
            return Err(PredictorError::MemberShapeMismatch);
        }
        if rows
            .iter()
            .any(|r| !(r.a1.is_finite() && r.a2.is_finite() && r.b.is_finite()))
        {
            return Err(PredictorError::NonFinite);
        }
        Ok(Self { rows })
    }

    pub fn row(&self, i: usize) -> &PiecewiseLinearXY {
        &self.rows[i.min(PREDICTION_ROWS - 1)]
    }

    pub fn rows(&self) -> &[PiecewiseLinearXY] {
        &self.rows
    }
}
