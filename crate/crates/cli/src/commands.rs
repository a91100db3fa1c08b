//! The five subcommands: generate, fit, benchmark, diagnose, sweep.

use crate::output::{fmt, fmt_opt, write_csv, write_json, Provenance};
use crate::spec::{ExperimentSpec, PredictorKind};
use crate::CliError;
use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;
use strikesim_core::metrics::{median_strike_error_by_frame, StrikeErrorSample};
use strikesim_core::predictor::{
    fit_knn_predictor, knn_fold_members, row_features, NoisyOracle, PredictorModel, PREDICTION_ROWS,
};
use strikesim_core::robot::{JointLimits, KinematicChain};
use strikesim_core::segment::Segment;
use strikesim_core::sim::{run_benchmark, sweep_alphas, PolicyKind, RobotSetup};
use strikesim_core::simgen::{
    generate_dataset, load_dataset, save_dataset, DatasetManifest, SplitAssignment,
};
use strikesim_core::spatial::TableGeometry;
use strikesim_core::uncertainty::{
    confidence_residual_diagnostics, ensemble_strike_stddev, error_to_confidence, fit_kappa,
    ConformalCalibration, CorrelationReport, KnnErrorModel, TimeToHitConfidence,
};

pub fn cmd_generate(spec: &ExperimentSpec, out: &Path) -> Result<(), CliError> {
    let provenance = Provenance::new("generate", spec.seed, spec.hash());
    let (segments, manifest) =
        generate_dataset(&spec.dataset.generator).map_err(|e| CliError::Config(anyhow!(e)))?;
    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(CliError::Runtime)?;
    save_dataset(out, &segments, &manifest).map_err(|e| CliError::Runtime(anyhow!(e)))?;
    #[derive(Serialize)]
    struct GenerateSummary {
        accepted: usize,
        dataset_config_hash: String,
    }
    write_json(
        &out.join("provenance.json"),
        &provenance,
        &GenerateSummary {
            accepted: segments.len(),
            dataset_config_hash: manifest.config_hash.clone(),
        },
    )
    .map_err(CliError::Runtime)?;
    println!(
        "generated {} segments into {} (config hash {})",
        segments.len(),
        out.display(),
        manifest.config_hash
    );
    Ok(())
}

pub fn cmd_fit(spec: &ExperimentSpec, out: &Path) -> Result<(), CliError> {
    let provenance = Provenance::new("fit", spec.seed, spec.hash());
    let (segments, manifest) = load_dataset_for(spec)?;
    let splits = resolve_splits(&segments, &manifest)?;
    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(CliError::Runtime)?;

    let predictor = build_predictor(spec, &splits.train).map_err(CliError::Runtime)?;
    predictor
        .save(&out.join("predictor.json"))
        .map_err(|e| CliError::Runtime(anyhow!(e)))?;

    let table = TableGeometry::default();
    let eval_row = spec.uncertainty.eval_row;
    let estimators = &spec.uncertainty.estimators;

    if estimators.iter().any(|e| e == "conformal") {
        let scores = strike_errors(&predictor, &splits.calibration, eval_row, &table)
            .map_err(CliError::Runtime)?;
        let calibration = ConformalCalibration::new(scores, spec.uncertainty.alpha_conf)
            .map_err(|e| CliError::Runtime(anyhow!(e)))?;
        write_json(&out.join("conformal.json"), &provenance, &calibration)
            .map_err(CliError::Runtime)?;
    }

    if estimators.iter().any(|e| e == "time_to_hit") {
        let estimator = fit_time_to_hit(spec, &predictor, &splits.calibration, &table)
            .map_err(CliError::Runtime)?;
        write_json(&out.join("time_to_hit.json"), &provenance, &estimator)
            .map_err(CliError::Runtime)?;
    }

    if estimators.iter().any(|e| e == "knn_error") {
        let model = fit_knn_error(spec, &predictor, &splits.calibration, &table)
            .map_err(CliError::Runtime)?;
        write_json(&out.join("knn_error.json"), &provenance, &model).map_err(CliError::Runtime)?;
    }

    #[derive(Serialize)]
    struct FitSummary {
        train_segments: usize,
        calibration_segments: usize,
        estimators: Vec<String>,
    }
    write_json(
        &out.join("fit_summary.json"),
        &provenance,
        &FitSummary {
            train_segments: splits.train.len(),
            calibration_segments: splits.calibration.len(),
            estimators: estimators.clone(),
        },
    )
    .map_err(CliError::Runtime)?;
    println!(
        "fit predictor on {} segments; artifacts in {}",
        splits.train.len(),
        out.display()
    );
    Ok(())
}

pub fn cmd_benchmark(spec: &ExperimentSpec, out: &Path) -> Result<(), CliError> {
    let provenance = Provenance::new("benchmark", spec.seed, spec.hash());
    let (segments, manifest) = load_dataset_for(spec)?;
    let splits = resolve_splits(&segments, &manifest)?;
    let robot = robot_setup(spec)?;
    let table = TableGeometry::default();

    let policies: Vec<_> = spec.policies.iter().map(|p| p.to_policy()).collect();
    let needs_predictor = policies.iter().any(|p| p.kind != PolicyKind::ServoOnly);
    let predictor = if needs_predictor {
        Some(build_predictor(spec, &splits.train).map_err(CliError::Runtime)?)
    } else {
        None
    };

    let outcomes = run_benchmark(
        &splits.test,
        &policies,
        predictor.as_ref(),
        &robot,
        &table,
        &spec.sim,
    )
    .map_err(|e| CliError::Runtime(anyhow!(e)))?;

    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(CliError::Runtime)?;

    let mut rows = Vec::new();
    for outcome in &outcomes {
        for trial in &outcome.trials {
            let segment = splits
                .test
                .iter()
                .find(|s| s.id == trial.segment_id)
                .expect("trial segment exists");
            let region = table
                .region_of(segment.strike_point.x)
                .map_err(|e| CliError::Runtime(anyhow!(e)))?;
            rows.push(vec![
                trial.segment_id.clone(),
                outcome.policy.id.clone(),
                region.name().to_string(),
                (trial.hit as u8).to_string(),
                fmt(trial.end_distance_to_goal),
                fmt(segment.strike_point.x),
                fmt(segment.strike_point.z),
            ]);
        }
    }
    write_csv(
        &out.join("trials.csv"),
        &provenance,
        &[
            "segment_id",
            "policy",
            "region",
            "hit",
            "end_distance_to_goal",
            "true_strike_x",
            "true_strike_z",
        ],
        &rows,
    )
    .map_err(CliError::Runtime)?;

    #[derive(Serialize)]
    struct PolicyMetrics<'a> {
        policy: &'a strikesim_core::sim::ControllerPolicy,
        table: &'a strikesim_core::MetricsTable,
        trial_errors: &'a [(String, String)],
    }
    let combined: Vec<PolicyMetrics> = outcomes
        .iter()
        .map(|o| PolicyMetrics {
            policy: &o.policy,
            table: &o.table,
            trial_errors: &o.errors,
        })
        .collect();
    #[derive(Serialize)]
    struct MetricsDocument<'a> {
        policies: &'a [PolicyMetrics<'a>],
    }
    write_json(
        &out.join("metrics.json"),
        &provenance,
        &MetricsDocument {
            policies: &combined,
        },
    )
    .map_err(CliError::Runtime)?;
    for outcome in &outcomes {
        write_json(
            &out.join(format!("metrics_{}.json", outcome.policy.id)),
            &provenance,
            &PolicyMetrics {
                policy: &outcome.policy,
                table: &outcome.table,
                trial_errors: &outcome.errors,
            },
        )
        .map_err(CliError::Runtime)?;
        let all = &outcome.table.all;
        println!(
            "{}: {} / {} hits, mean end distance {}",
            outcome.policy.id,
            all.hits,
            all.total,
            fmt_opt(all.mean_end_distance)
        );
    }
    Ok(())
}

pub fn cmd_diagnose(spec: &ExperimentSpec, out: &Path) -> Result<(), CliError> {
    let provenance = Provenance::new("diagnose", spec.seed, spec.hash());
    if spec.uncertainty.estimators.is_empty() {
        return Err(CliError::Config(anyhow!("estimator set is empty")));
    }
    let (segments, manifest) = load_dataset_for(spec)?;
    let splits = resolve_splits(&segments, &manifest)?;
    if splits.calibration.is_empty() {
        return Err(CliError::Config(anyhow!(
            "dataset has no calibration split"
        )));
    }
    let table = TableGeometry::default();
    let predictor = build_predictor(spec, &splits.train).map_err(CliError::Runtime)?;
    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(CliError::Runtime)?;

    // Table-1 analog: per-frame median strike error by true region
    let mut frame_samples = Vec::new();
    for segment in &splits.test {
        let region = table
            .region_of(segment.strike_point.x)
            .map_err(|e| CliError::Runtime(anyhow!(e)))?;
        for &frame in &spec.uncertainty.frames {
            let err =
                strike_error(&predictor, segment, frame, &table).map_err(CliError::Runtime)?;
            frame_samples.push(StrikeErrorSample {
                segment_id: segment.id.clone(),
                region,
                frame,
                abs_error: err,
            });
        }
    }
    let frame_rows = median_strike_error_by_frame(&frame_samples);
    write_csv(
        &out.join("median_error_by_frame.csv"),
        &provenance,
        &["frame", "left", "center", "right", "all"],
        &frame_rows
            .iter()
            .map(|r| {
                vec![
                    r.frame.to_string(),
                    fmt_opt(r.left),
                    fmt_opt(r.center),
                    fmt_opt(r.right),
                    fmt_opt(r.all),
                ]
            })
            .collect::<Vec<_>>(),
    )
    .map_err(CliError::Runtime)?;

    let eval_row = spec.uncertainty.eval_row;
    let test_errors: Vec<f64> = splits
        .test
        .iter()
        .map(|s| strike_error(&predictor, s, eval_row, &table))
        .collect::<Result<_>>()
        .map_err(CliError::Runtime)?;

    let mut correlations: BTreeMap<String, CorrelationReport> = BTreeMap::new();
    for estimator in &spec.uncertainty.estimators {
        let (rows, confidences, errors) = match estimator.as_str() {
            "knn_error" => {
                let model = fit_knn_error(spec, &predictor, &splits.calibration, &table)
                    .map_err(CliError::Runtime)?;
                let confidences: Vec<f64> = splits
                    .test
                    .iter()
                    .map(|s| {
                        let features =
                            row_features(s.pre_hit_frames(), eval_row, spec.predictor.window);
                        model.confidence(&features).map_err(|e| anyhow!(e))
                    })
                    .collect::<Result<_>>()
                    .map_err(CliError::Runtime)?;
                scatter_rows(&splits.test, estimator, &confidences, &test_errors)
            }
            "ensemble" => {
                let members = ensemble_members(spec, &splits.train).map_err(CliError::Runtime)?;
                let confidences: Vec<f64> = splits
                    .test
                    .iter()
                    .map(|s| {
                        let params: Vec<_> = members
                            .iter()
                            .map(|m| m.predict_row(s, eval_row))
                            .collect::<Result<_, _>>()
                            .map_err(|e| anyhow!(e))?;
                        let stddev = ensemble_strike_stddev(&params, table.strike_plane_y)
                            .map_err(|e| anyhow!(e))?;
                        Ok(error_to_confidence(stddev))
                    })
                    .collect::<Result<_>>()
                    .map_err(CliError::Runtime)?;
                scatter_rows(&splits.test, estimator, &confidences, &test_errors)
            }
            "conformal" => {
                let scores = strike_errors(&predictor, &splits.calibration, eval_row, &table)
                    .map_err(CliError::Runtime)?;
                let calibration = ConformalCalibration::new(scores, spec.uncertainty.alpha_conf)
                    .map_err(|e| CliError::Runtime(anyhow!(e)))?;
                // split conformal assigns every prediction the same width,
                // so the scatter is a vertical line and correlation is
                // reported as degenerate
                let confidence = error_to_confidence(calibration.quantile());
                let confidences = vec![confidence; splits.test.len()];
                scatter_rows(&splits.test, estimator, &confidences, &test_errors)
            }
            "time_to_hit" => {
                let estimator_model =
                    fit_time_to_hit(spec, &predictor, &splits.calibration, &table)
                        .map_err(CliError::Runtime)?;
                // confidence varies with the horizon: scatter over
                // (segment, frame) pairs
                let mut rows = Vec::new();
                let mut confidences = Vec::new();
                let mut errors = Vec::new();
                for sample in &frame_samples {
                    let confidence = estimator_model
                        .confidence(sample.frame as f64)
                        .map_err(|e| anyhow!(e))
                        .map_err(CliError::Runtime)?;
                    rows.push(vec![
                        sample.segment_id.clone(),
                        estimator.clone(),
                        fmt(confidence),
                        fmt(sample.abs_error),
                    ]);
                    confidences.push(confidence);
                    errors.push(sample.abs_error);
                }
                (rows, confidences, errors)
            }
            other => {
                return Err(CliError::Config(anyhow!("unknown estimator '{other}'")));
            }
        };
        write_csv(
            &out.join(format!("scatter_{estimator}.csv")),
            &provenance,
            &["segment_id", "estimator", "confidence", "abs_strike_error"],
            &rows,
        )
        .map_err(CliError::Runtime)?;
        let report = confidence_residual_diagnostics(&confidences, &errors)
            .map_err(|e| CliError::Runtime(anyhow!(e)))?;
        correlations.insert(estimator.clone(), report);
    }

    #[derive(Serialize)]
    struct Diagnostics<'a> {
        strike_error_metric: &'static str,
        eval_row: usize,
        correlations: &'a BTreeMap<String, CorrelationReport>,
    }
    write_json(
        &out.join("diagnostics.json"),
        &provenance,
        &Diagnostics {
            strike_error_metric: "absolute x error at the strike plane",
            eval_row,
            correlations: &correlations,
        },
    )
    .map_err(CliError::Runtime)?;
    println!(
        "diagnosed {} estimators over {} test segments into {}",
        spec.uncertainty.estimators.len(),
        splits.test.len(),
        out.display()
    );
    Ok(())
}

pub fn cmd_sweep(spec: &ExperimentSpec, out: &Path) -> Result<(), CliError> {
    let provenance = Provenance::new("sweep", spec.seed, spec.hash());
    let (segments, manifest) = load_dataset_for(spec)?;
    let splits = resolve_splits(&segments, &manifest)?;
    if splits.calibration.is_empty() {
        return Err(CliError::Config(anyhow!(
            "dataset has no calibration split"
        )));
    }
    let template = spec
        .policies
        .iter()
        .find(|p| p.id == spec.sweep.policy)
        .ok_or_else(|| {
            CliError::Config(anyhow!(
                "sweep policy '{}' not found in [policies]",
                spec.sweep.policy
            ))
        })?
        .to_policy();
    let robot = robot_setup(spec)?;
    let table = TableGeometry::default();
    let predictor = if template.kind != PolicyKind::ServoOnly {
        Some(build_predictor(spec, &splits.train).map_err(CliError::Runtime)?)
    } else {
        None
    };
    let calibration: Vec<Segment> = splits.calibration.to_vec();
    let ((alpha1, alpha2), cells) = sweep_alphas(
        &calibration,
        &template,
        &spec.sweep.alpha1_grid,
        &spec.sweep.alpha2_grid,
        predictor.as_ref(),
        &robot,
        &table,
        &spec.sim,
    )
    .map_err(|e| CliError::Runtime(anyhow!(e)))?;

    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(CliError::Runtime)?;
    write_csv(
        &out.join("sweep_grid.csv"),
        &provenance,
        &["alpha1", "alpha2", "hits", "mean_end_distance"],
        &cells
            .iter()
            .map(|c| {
                vec![
                    fmt(c.alpha1),
                    fmt(c.alpha2),
                    c.hits.to_string(),
                    fmt_opt(c.mean_end_distance),
                ]
            })
            .collect::<Vec<_>>(),
    )
    .map_err(CliError::Runtime)?;
    #[derive(Serialize)]
    struct SweepResult {
        alpha1: f64,
        alpha2: f64,
        policy: String,
        calibration_segments: usize,
    }
    write_json(
        &out.join("sweep_result.json"),
        &provenance,
        &SweepResult {
            alpha1,
            alpha2,
            policy: spec.sweep.policy.clone(),
            calibration_segments: calibration.len(),
        },
    )
    .map_err(CliError::Runtime)?;
    println!("sweep selected alpha1 = {alpha1}, alpha2 = {alpha2}");
    Ok(())
}

struct Splits {
    train: Vec<Segment>,
    calibration: Vec<Segment>,
    test: Vec<Segment>,
}

fn load_dataset_for(spec: &ExperimentSpec) -> Result<(Vec<Segment>, DatasetManifest), CliError> {
    let path = spec
        .dataset
        .path
        .as_ref()
        .ok_or_else(|| CliError::Config(anyhow!("[dataset].path is not set")))?;
    load_dataset(path, &TableGeometry::default())
        .with_context(|| format!("cannot load dataset from {}", path.display()))
        .map_err(CliError::Config)
}

fn resolve_splits(segments: &[Segment], manifest: &DatasetManifest) -> Result<Splits, CliError> {
    let of = |assignment: SplitAssignment| -> Vec<Segment> {
        segments
            .iter()
            .filter(|s| manifest.splits.get(&s.id) == Some(&assignment))
            .cloned()
            .collect()
    };
    let splits = Splits {
        train: of(SplitAssignment::Train),
        calibration: of(SplitAssignment::Calibration),
        test: of(SplitAssignment::Test),
    };
    if splits.train.is_empty() || splits.test.is_empty() {
        return Err(CliError::Config(anyhow!(
            "dataset is missing train or test segments"
        )));
    }
    Ok(splits)
}

fn robot_setup(spec: &ExperimentSpec) -> Result<RobotSetup, CliError> {
    let limits = match &spec.robot.limits_path {
        Some(path) => strikesim_core::robot::RobotLimitsConfig::from_path(path)
            .and_then(|c| c.to_limits())
            .map_err(|e| CliError::Config(anyhow!(e)))?,
        None => JointLimits::table_defaults(),
    };
    let chain = match &spec.robot.chain_path {
        Some(path) => KinematicChain::from_path(path).map_err(|e| CliError::Config(anyhow!(e)))?,
        None => KinematicChain::standard(),
    };
    Ok(RobotSetup { chain, limits })
}

fn train_rows(spec: &ExperimentSpec) -> Vec<usize> {
    if spec.predictor.train_rows.is_empty() {
        (0..PREDICTION_ROWS).collect()
    } else {
        spec.predictor.train_rows.clone()
    }
}

fn build_predictor(spec: &ExperimentSpec, train: &[Segment]) -> Result<PredictorModel> {
    if let Some(path) = &spec.predictor.path {
        return PredictorModel::load(path).map_err(|e| anyhow!(e));
    }
    match spec.predictor.kind {
        PredictorKind::Knn => Ok(PredictorModel::Knn(
            fit_knn_predictor(
                train,
                spec.predictor.k,
                spec.predictor.window,
                &train_rows(spec),
            )
            .map_err(|e| anyhow!(e))?,
        )),
        PredictorKind::NoisyOracle => Ok(PredictorModel::NoisyOracle(NoisyOracle {
            sigma_intercept: spec.predictor.sigma_intercept,
            sigma_slope: spec.predictor.sigma_slope,
            slope_noise: 1.0 / 400.0,
            seed: spec.seed,
            bias: 0.0,
        })),
        PredictorKind::Ensemble => Ok(PredictorModel::Ensemble {
            members: ensemble_members(spec, train)?,
        }),
    }
}

fn ensemble_members(spec: &ExperimentSpec, train: &[Segment]) -> Result<Vec<PredictorModel>> {
    knn_fold_members(
        train,
        spec.predictor.members,
        spec.predictor.k,
        spec.predictor.window,
        &train_rows(spec),
    )
    .map_err(|e| anyhow!(e))
}

fn strike_error(
    predictor: &PredictorModel,
    segment: &Segment,
    row: usize,
    table: &TableGeometry,
) -> Result<f64> {
    let predicted = predictor
        .predict_row(segment, row)
        .map_err(|e| anyhow!(e))?
        .strike_x(table.strike_plane_y);
    Ok((predicted - segment.truth_params.strike_x(table.strike_plane_y)).abs())
}

fn strike_errors(
    predictor: &PredictorModel,
    segments: &[Segment],
    row: usize,
    table: &TableGeometry,
) -> Result<Vec<f64>> {
    segments
        .iter()
        .map(|s| strike_error(predictor, s, row, table))
        .collect()
}

fn fit_time_to_hit(
    spec: &ExperimentSpec,
    predictor: &PredictorModel,
    calibration: &[Segment],
    table: &TableGeometry,
) -> Result<TimeToHitConfidence> {
    let mut points = Vec::new();
    for &frame in &spec.uncertainty.frames {
        let errors = strike_errors(predictor, calibration, frame, table)?;
        if let Some(m) = strikesim_core::metrics::median(&errors) {
            points.push((frame as f64, m));
        }
    }
    if points.len() < 2 {
        bail!("not enough calibration frames for the time-to-hit fit");
    }
    let kappa = fit_kappa(&points).map_err(|e| anyhow!(e))?;
    Ok(TimeToHitConfidence { kappa })
}

fn fit_knn_error(
    spec: &ExperimentSpec,
    predictor: &PredictorModel,
    calibration: &[Segment],
    table: &TableGeometry,
) -> Result<KnnErrorModel> {
    let eval_row = spec.uncertainty.eval_row;
    let data: Vec<(Vec<f64>, f64)> = calibration
        .iter()
        .map(|s| {
            let features = row_features(s.pre_hit_frames(), eval_row, spec.predictor.window);
            strike_error(predictor, s, eval_row, table).map(|e| (features, e))
        })
        .collect::<Result<_>>()?;
    let k = spec.uncertainty.knn_error_k.min(data.len().max(1));
    KnnErrorModel::fit(&data, k).map_err(|e| anyhow!(e))
}

fn scatter_rows(
    segments: &[Segment],
    estimator: &str,
    confidences: &[f64],
    errors: &[f64],
) -> (Vec<Vec<String>>, Vec<f64>, Vec<f64>) {
    let rows = segments
        .iter()
        .zip(confidences.iter().zip(errors))
        .map(|(s, (c, e))| vec![s.id.clone(), estimator.to_string(), fmt(*c), fmt(*e)])
        .collect();
    (rows, confidences.to_vec(), errors.to_vec())
}
