//! Anticipatory prediction: pre-hit state series → per-frame trajectory
//! parameters, with non-neural baselines behind a pluggable interface.

mod ensemble;
mod knn;
mod matrix;
mod oracle;

pub use ensemble::{ensemble_predict, knn_fold_members, EnsemblePrediction};
pub use knn::{fit_knn_predictor, KnnPredictor, KnnRegressor};
pub use matrix::{PredictionMatrix, PREDICTION_ROWS};
pub use oracle::NoisyOracle;

use crate::segment::Segment;
use crate::state::GameState;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PredictorError {
    #[error("dataset must not be empty")]
    EmptyDataset,
    #[error("k = {k} exceeds dataset size {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("k must be at least 1")]
    KZero,
    #[error("feature width mismatch: expected {expected}, got {got}")]
    FeatureWidth { expected: usize, got: usize },
    #[error("ensemble needs at least 2 members, got {0}")]
    TooFewMembers(usize),
    #[error("ensemble member outputs disagree in shape")]
    MemberShapeMismatch,
    #[error("noise scale must be non-negative")]
    NegativeSigma,
    #[error("no pre-hit frames supplied")]
    NoFrames,
    #[error("prediction produced non-finite parameters")]
    NonFinite,
    #[error("persistence error: {0}")]
    Persistence(String),
}

/// Fixed-width feature vector: the last `window` pre-hit frames flattened.
///
/// `frames` is the pre-hit series ending at the hit (t = 0). Row `i` uses
/// the window ending `i` frames before the hit; missing history at the
/// front is padded by repeating the earliest frame.
pub fn row_features(frames: &[GameState], row: usize, window: usize) -> Vec<f64> {
    let mut features = Vec::with_capacity(window * crate::state::STATE_DIM);
    let last = frames.len() as i64 - 1 - row as i64;
    for offset in (0..window as i64).rev() {
        let index = (last - offset).clamp(0, frames.len() as i64 - 1) as usize;
        features.extend_from_slice(&frames[index].flatten());
    }
    features
}

/// Largest row index whose feature window is fully backed by real history.
pub fn last_computable_row(frame_count: usize, window: usize) -> usize {
    frame_count.saturating_sub(window).min(PREDICTION_ROWS - 1)
}

/// A fitted predictor: kNN regression, a controlled-error oracle, or an
/// ensemble of either.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorModel {
    Knn(KnnPredictor),
    NoisyOracle(NoisyOracle),
    Ensemble { members: Vec<PredictorModel> },
}

impl PredictorModel {
    /// Full 30-row prediction matrix for a segment.
    pub fn predict(&self, segment: &Segment) -> Result<PredictionMatrix, PredictorError> {
        match self {
            PredictorModel::Knn(knn) => knn.predict_series(segment.pre_hit_frames()),
            PredictorModel::NoisyOracle(oracle) => oracle.predict(segment),
            PredictorModel::Ensemble { members } => Ok(ensemble_predict(members, segment)?.mean),
        }
    }

    /// Single-row prediction; avoids the full-matrix cost for kNN models.
    pub fn predict_row(
        &self,
        segment: &Segment,
        row: usize,
    ) -> Result<crate::trajectory::PiecewiseLinearXY, PredictorError> {
        match self {
            PredictorModel::Knn(knn) => knn.predict_row(segment.pre_hit_frames(), row),
            PredictorModel::NoisyOracle(oracle) => Ok(*oracle.predict(segment)?.row(row)),
            PredictorModel::Ensemble { members } => {
                let mut sum = [0.0f64; 3];
                for member in members {
                    let p = member.predict_row(segment, row)?;
                    sum[0] += p.a1;
                    sum[1] += p.a2;
                    sum[2] += p.b;
                }
                let n = members.len() as f64;
                crate::trajectory::PiecewiseLinearXY::new(sum[0] / n, sum[1] / n, sum[2] / n)
                    .map_err(|_| PredictorError::NonFinite)
            }
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), PredictorError> {
        #[derive(Serialize)]
        struct Document<'a> {
            version: u32,
            model: &'a PredictorModel,
        }
        let doc = Document {
            version: MODEL_SCHEMA_VERSION,
            model: self,
        };
        let json = serde_json::to_string_pretty(&doc)
            .map_err(|e| PredictorError::Persistence(e.to_string()))?;
        std::fs::write(path, json).map_err(|e| PredictorError::Persistence(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, PredictorError> {
        #[derive(Deserialize)]
        struct Document {
            version: u32,
            model: PredictorModel,
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| PredictorError::Persistence(e.to_string()))?;
        let doc: Document =
            serde_json::from_str(&text).map_err(|e| PredictorError::Persistence(e.to_string()))?;
        if doc.version != MODEL_SCHEMA_VERSION {
            return Err(PredictorError::Persistence(format!(
                "unsupported model schema version {}",
                doc.version
            )));
        }
        Ok(doc.model)
    }
}
