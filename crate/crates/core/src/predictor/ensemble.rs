//! Ensembles: element-wise mean prediction and member spread.

use super::matrix::{PredictionMatrix, PREDICTION_ROWS};
use super::{fit_knn_predictor, PredictorError, PredictorModel};
use crate::segment::Segment;
use crate::trajectory::PiecewiseLinearXY;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsemblePrediction {
    pub mean: PredictionMatrix,
    /// Population stddev of (a1, a2, b) across members, per row.
    pub param_stddev: Vec<[f64; 3]>,
    /// Raw member outputs, kept so uncertainty estimators can propagate
    /// through derived quantities without linearization.
    pub member_outputs: Vec<PredictionMatrix>,
}

pub fn ensemble_predict(
    members: &[PredictorModel],
    segment: &Segment,
) -> Result<EnsemblePrediction, PredictorError> {
    if members.len() < 2 {
        return Err(PredictorError::TooFewMembers(members.len()));
    }
    let member_outputs = members
        .iter()
        .map(|m| m.predict(segment))
        .collect::<Result<Vec<_>, _>>()?;
    let n = members.len() as f64;
    let mut mean_rows = Vec::with_capacity(PREDICTION_ROWS);
    let mut param_stddev = Vec::with_capacity(PREDICTION_ROWS);
    for row in 0..PREDICTION_ROWS {
        let mut mean = [0.0f64; 3];
        for output in &member_outputs {
            let p = output.row(row);
            mean[0] += p.a1 / n;
            mean[1] += p.a2 / n;
            mean[2] += p.b / n;
        }
        let mut var = [0.0f64; 3];
        for output in &member_outputs {
            let p = output.row(row);
            var[0] += (p.a1 - mean[0]).powi(2) / n;
            var[1] += (p.a2 - mean[1]).powi(2) / n;
            var[2] += (p.b - mean[2]).powi(2) / n;
        }
        mean_rows.push(
            PiecewiseLinearXY::new(mean[0], mean[1], mean[2])
                .map_err(|_| PredictorError::NonFinite)?,
        );
        param_stddev.push([var[0].sqrt(), var[1].sqrt(), var[2].sqrt()]);
    }
    Ok(EnsemblePrediction {
        mean: PredictionMatrix::new(mean_rows)?,
        param_stddev,
        member_outputs,
    })
}

/// k-fold members: member m is trained on everything but fold m.
pub fn knn_fold_members(
    train: &[Segment],
    folds: usize,
    k: usize,
    window: usize,
    train_rows: &[usize],
) -> Result<Vec<PredictorModel>, PredictorError> {
    if folds < 2 {
        return Err(PredictorError::TooFewMembers(folds));
    }
    if train.len() < folds {
        return Err(PredictorError::EmptyDataset);
    }
    (0..folds)
        .map(|fold| {
            let subset: Vec<Segment> = train
                .iter()
                .enumerate()
                .filter(|(i, _)| i % folds != fold)
                .map(|(_, s)| s.clone())
                .collect();
            Ok(PredictorModel::Knn(fit_knn_predictor(
                &subset, k, window, train_rows,
            )?))
        })
        .collect()
}
