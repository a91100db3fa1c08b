//! k-nearest-neighbor regression on standardized features, and the
//! segment-level predictor built on it.

use super::matrix::{PredictionMatrix, PREDICTION_ROWS};
use super::{last_computable_row, row_features, PredictorError};
use crate::segment::Segment;
use crate::state::GameState;
use crate::trajectory::PiecewiseLinearXY;
use serde::{Deserialize, Serialize};

/// Generic kNN regressor: per-dimension z-scored features, Euclidean
/// distance, unweighted mean of the k nearest targets. Ties at the k
/// boundary break by stable dataset order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnRegressor {
    pub k: usize,
    feature_mean: Vec<f64>,
    feature_std: Vec<f64>,
    /// Standardized training features, row-major.
    features: Vec<Vec<f64>>,
    targets: Vec<Vec<f64>>,
}

impl KnnRegressor {
    pub fn fit(data: &[(Vec<f64>, Vec<f64>)], k: usize) -> Result<Self, PredictorError> {
        if data.is_empty() {
            return Err(PredictorError::EmptyDataset);
        }
        if k == 0 {
            return Err(PredictorError::KZero);
        }
        if k > data.len() {
            return Err(PredictorError::KTooLarge { k, n: data.len() });
        }
        let dims = data[0].0.len();
        for (features, _) in data {
            if features.len() != dims {
                return Err(PredictorError::FeatureWidth {
                    expected: dims,
                    got: features.len(),
                });
            }
        }
        let n = data.len() as f64;
        let mut mean = vec![0.0; dims];
        for (features, _) in data {
            for (m, v) in mean.iter_mut().zip(features) {
                *m += v / n;
            }
        }
        let mut std = vec![0.0; dims];
        for (features, _) in data {
            for (s, (v, m)) in std.iter_mut().zip(features.iter().zip(&mean)) {
                *s += (v - m).powi(2) / n;
            }
        }
        for s in std.iter_mut() {
            *s = s.sqrt();
        }
        let standardize = |features: &[f64]| {
            features
                .iter()
                .zip(mean.iter().zip(&std))
                .map(|(v, (m, s))| if *s > 1e-12 { (v - m) / s } else { 0.0 })
                .collect::<Vec<f64>>()
        };
        Ok(Self {
            k,
            features: data.iter().map(|(f, _)| standardize(f)).collect(),
            targets: data.iter().map(|(_, t)| t.clone()).collect(),
            feature_mean: mean,
            feature_std: std,
        })
    }

    pub fn predict(&self, query: &[f64]) -> Result<Vec<f64>, PredictorError> {
        if query.len() != self.feature_mean.len() {
            return Err(PredictorError::FeatureWidth {
                expected: self.feature_mean.len(),
                got: query.len(),
            });
        }
        let standardized: Vec<f64> = query
            .iter()
            .zip(self.feature_mean.iter().zip(&self.feature_std))
            .map(|(v, (m, s))| if *s > 1e-12 { (v - m) / s } else { 0.0 })
            .collect();

        // running k-best with exact early abandon: once the partial squared
        // distance exceeds the current kth best, the point cannot enter;
        // ties keep the earlier dataset index, matching a stable full sort
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(self.k + 1);
        for (i, features) in self.features.iter().enumerate() {
            let bound = if best.len() == self.k {
                best[self.k - 1].0
            } else {
                f64::INFINITY
            };
            let mut d2 = 0.0;
            let mut abandoned = false;
            for (chunk_f, chunk_q) in features.chunks(32).zip(standardized.chunks(32)) {
                for (a, b) in chunk_f.iter().zip(chunk_q) {
                    let diff = a - b;
                    d2 += diff * diff;
                }
                if d2 > bound {
                    abandoned = true;
                    break;
                }
            }
            if abandoned || d2 > bound || (d2 == bound && best.len() == self.k) {
                continue;
            }
            let pos = best.partition_point(|(bd, _)| *bd <= d2);
            best.insert(pos, (d2, i));
            best.truncate(self.k);
        }

        let dim = self.targets[0].len();
        let mut out = vec![0.0; dim];
        for (_, idx) in &best {
            for (o, t) in out.iter_mut().zip(&self.targets[*idx]) {
                *o += t / self.k as f64;
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Segment-level kNN predictor: one regressor over window features drawn
/// from every configured training row, queried per row at prediction time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnPredictor {
    pub regressor: KnnRegressor,
    pub window: usize,
    pub train_rows: Vec<usize>,
}

/// Fit on a training split: one (features, truth) pair per segment per
/// training row.
pub fn fit_knn_predictor(
    train: &[Segment],
    k: usize,
    window: usize,
    train_rows: &[usize],
) -> Result<KnnPredictor, PredictorError> {
    if train.is_empty() {
        return Err(PredictorError::EmptyDataset);
    }
    let mut data = Vec::with_capacity(train.len() * train_rows.len());
    for segment in train {
        let frames = segment.pre_hit_frames();
        let truth = vec![
            segment.truth_params.a1,
            segment.truth_params.a2,
            segment.truth_params.b,
        ];
        for &row in train_rows {
            data.push((row_features(frames, row, window), truth.clone()));
        }
    }
    Ok(KnnPredictor {
        regressor: KnnRegressor::fit(&data, k)?,
        window,
        train_rows: train_rows.to_vec(),
    })
}

impl KnnPredictor {
    pub fn predict_row(
        &self,
        frames: &[GameState],
        row: usize,
    ) -> Result<PiecewiseLinearXY, PredictorError> {
        if frames.is_empty() {
            return Err(PredictorError::NoFrames);
        }
        // rows beyond available history replicate the earliest computable one
        let effective = row.min(last_computable_row(frames.len(), self.window));
        let out = self
            .regressor
            .predict(&row_features(frames, effective, self.window))?;
        PiecewiseLinearXY::new(out[0], out[1], out[2]).map_err(|_| PredictorError::NonFinite)
    }

    pub fn predict_series(&self, frames: &[GameState]) -> Result<PredictionMatrix, PredictorError> {
        let rows = (0..PREDICTION_ROWS)
            .map(|row| self.predict_row(frames, row))
            .collect::<Result<Vec<_>, _>>()?;
        PredictionMatrix::new(rows)
    }
}
