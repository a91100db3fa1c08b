//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured quantity against its pinned tolerance.
//!
//! The standard benchmark is a fixed synthetic dataset (1250 segments,
//! right-skewed region mix, ≥200 test segments) shared by the limit-safety,
//! horizon, and controller-ordering criteria; the controller-ordering
//! robustness checks rerun it over five seeds.

use nalgebra::{SMatrix, SVector, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use strikesim_core::geometry::{lowpass_filter, triangulate_dlt, CameraModel, PixelObservation};
use strikesim_core::metrics::median;
use strikesim_core::predictor::{fit_knn_predictor, knn_fold_members, NoisyOracle, PredictorModel};
use strikesim_core::robot::{
    min_norm_joint_velocity, spatial_jacobian, validate_trace, JointLimits, KinematicChain, DOF,
};
use strikesim_core::sim::{run_benchmark, run_trial, ControllerPolicy, RobotSetup, SimConfig};
use strikesim_core::simgen::{
    generate_dataset, refit_truth, split_segments, GeneratorConfig, SplitAssignment,
};
use strikesim_core::spatial::{Region, TableGeometry};
use strikesim_core::trajectory::{
    fit_piecewise, fit_servo_estimate, trajectory_loss, PiecewiseLinearXY,
};
use strikesim_core::uncertainty::{ensemble_strike_stddev, ConformalCalibration};
use strikesim_core::Segment;

fn standard_generator(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        segment_count: 1250,
        region_weights: [0.18, 0.36, 0.46],
        predictability: 1.0,
        ..GeneratorConfig::default()
    }
}

/// Center-biased scenario: low predictability over a right-skewed mix makes
/// the kNN collapse left-region predictions toward the center-right (the
/// mean prediction for left strikes lands just right of zero).
fn skewed_generator(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        predictability: 0.25,
        ..standard_generator(seed)
    }
}

struct Dataset {
    train: Vec<Segment>,
    calibration: Vec<Segment>,
    test: Vec<Segment>,
}

fn build_dataset(config: &GeneratorConfig) -> Dataset {
    let (segments, manifest) = generate_dataset(config).expect("generation succeeds");
    let clone_split = |split: SplitAssignment| -> Vec<Segment> {
        split_segments(&segments, &manifest, split)
            .into_iter()
            .cloned()
            .collect()
    };
    let dataset = Dataset {
        train: clone_split(SplitAssignment::Train),
        calibration: clone_split(SplitAssignment::Calibration),
        test: clone_split(SplitAssignment::Test),
    };
    assert!(
        dataset.test.len() >= 200,
        "standard benchmark must hold ≥200 test segments, got {}",
        dataset.test.len()
    );
    dataset
}

fn fit_knn(train: &[Segment]) -> PredictorModel {
    PredictorModel::Knn(fit_knn_predictor(train, 8, 10, &[1, 10, 20]).expect("knn fits"))
}

fn strike_error(predictor: &PredictorModel, segment: &Segment, row: usize) -> f64 {
    let predicted = predictor
        .predict_row(segment, row)
        .expect("prediction succeeds")
        .strike_x(-140.0);
    (predicted - segment.strike_point.x).abs()
}

#[test]
fn criterion_01_control_law_matches_svd_pseudoinverse_oracle() {
    let started = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let jacobian = SMatrix::<f64, 3, DOF>::from_fn(|_, _| rng.random_range(-3.0..3.0));
        let task = Vector3::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        let solution = min_norm_joint_velocity(&jacobian, &task).joint_velocities;
        let oracle = jacobian.pseudo_inverse(1e-12).expect("pseudo inverse") * task;
        worst = worst.max((solution - oracle).norm());

        // residual optimality and minimum norm among near-equal residuals
        let base_residual = (jacobian * solution - task).norm();
        for _ in 0..20 {
            let perturbation = SVector::<f64, DOF>::from_fn(|_, _| rng.random_range(-0.05..0.05));
            let candidate = solution + perturbation;
            let residual = (jacobian * candidate - task).norm();
            assert!(base_residual <= residual + 1e-10);
            if (residual - base_residual).abs() <= 1e-10 {
                assert!(solution.norm() <= candidate.norm() + 1e-10);
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(worst <= 1e-8, "worst deviation {worst:.3e} > 1e-8");
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?} ≥ 10 s");
    println!(
        "criterion 1 PASS: min-norm vs SVD pseudoinverse worst deviation {worst:.3e} ≤ 1e-8 over 1000 pairs in {elapsed:?}"
    );
}

#[test]
fn criterion_02_jacobian_matches_finite_differences() {
    let chain = KinematicChain::standard();
    let limits = JointLimits::table_defaults();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut theta = [0.0; DOF];
        for (i, value) in theta.iter_mut().enumerate() {
            let limit = limits.joint(i);
            let margin = 0.01 * (limit.max_position - limit.min_position);
            *value = rng.random_range(limit.min_position + margin..limit.max_position - margin);
        }
        let analytic = spatial_jacobian(&chain, &theta, Some(&limits)).expect("jacobian");
        let mut numeric = SMatrix::<f64, 3, DOF>::zeros();
        let h = 1e-6;
        for col in 0..DOF {
            let mut plus = theta;
            let mut minus = theta;
            plus[col] += h;
            minus[col] -= h;
            let p = chain.forward_kinematics(&plus, None).unwrap().position;
            let m = chain.forward_kinematics(&minus, None).unwrap().position;
            numeric.set_column(col, &((p - m) / (2.0 * h)));
        }
        let relative = (analytic - numeric).norm() / analytic.norm().max(1.0);
        worst = worst.max(relative);
    }
    assert!(worst <= 1e-6, "worst relative error {worst:.3e} > 1e-6");
    println!(
        "criterion 2 PASS: jacobian vs central differences worst relative error {worst:.3e} ≤ 1e-6 over 100 configs"
    );
}

#[test]
fn criterion_03_limit_safety_across_the_standard_benchmark() {
    let dataset = build_dataset(&standard_generator(2024));
    let robot = RobotSetup::standard();
    let table = TableGeometry::default();
    let sim = SimConfig::default();
    let predictor = fit_knn(&dataset.train);
    let policies = vec![
        ControllerPolicy::servo_only(),
        ControllerPolicy::anticipatory(1.0, 1.0),
        ControllerPolicy::uncertainty_aware(0.6, 1.0),
    ];
    let outcomes = run_benchmark(
        &dataset.test,
        &policies,
        Some(&predictor),
        &robot,
        &table,
        &sim,
    )
    .expect("benchmark runs");
    let mut trials = 0usize;
    for outcome in &outcomes {
        assert!(
            outcome.errors.is_empty(),
            "trial errors: {:?}",
            outcome.errors
        );
        for output in &outcome.outputs {
            validate_trace(&output.command_trace, &robot.limits, sim.command_dt(), 1e-9)
                .expect("envelope violated");
            trials += 1;
        }
    }
    println!(
        "criterion 3 PASS: zero position/velocity/acceleration violations beyond 1e-9 across {} trials ({} segments × {} policies)",
        trials,
        dataset.test.len(),
        policies.len()
    );
}

#[test]
fn criterion_04_noiseless_triangulation_roundtrip() {
    // four-camera rig with a shared optical axis and x/y baselines
    let make = |tx: f64, ty: f64| {
        CameraModel::new(
            [
                [800.0, 0.0, 720.0, -tx * 800.0],
                [0.0, 800.0, 540.0, -ty * 800.0],
                [0.0, 0.0, 1.0, 300.0],
            ],
            (1440, 1080),
        )
        .unwrap()
    };
    let cameras = vec![
        make(-80.0, -30.0),
        make(-20.0, 35.0),
        make(35.0, -25.0),
        make(80.0, 40.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let point = Vector3::new(
            rng.random_range(-70.0..70.0),
            rng.random_range(-135.0..135.0),
            rng.random_range(0.0..60.0),
        );
        let count = 2 + (trial % 3);
        let observations: Vec<PixelObservation> = (0..count)
            .map(|id| {
                let (u, v) = cameras[id].project(&point).unwrap();
                PixelObservation {
                    camera_id: id,
                    u,
                    v,
                    frame: 0,
                }
            })
            .collect();
        let result = triangulate_dlt(&observations, &cameras).expect("triangulation");
        worst = worst.max(result.rms_reprojection_error);
    }
    assert!(worst <= 1e-9, "worst reprojection {worst:.3e} > 1e-9");
    println!(
        "criterion 4 PASS: noiseless project→triangulate reprojection ≤ 1e-9 px (worst {worst:.3e}) over 1000 points"
    );
}

#[test]
fn criterion_05_trajectory_fitting_and_loss_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);

    // exact piecewise recovery
    let mut worst_piecewise = 0.0f64;
    for _ in 0..200 {
        let truth = PiecewiseLinearXY::new(
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
            rng.random_range(-40.0..40.0),
        )
        .unwrap();
        let bounce_y = rng.random_range(-60.0..-15.0);
        let samples: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let y = 137.0 - i as f64 * 7.1;
                let x = if y > bounce_y {
                    truth.pre_line(y)
                } else {
                    truth.post_line(y)
                };
                (y, x)
            })
            .collect();
        let fit = fit_piecewise(&samples, bounce_y).expect("fit");
        worst_piecewise = worst_piecewise
            .max((fit.params.a1 - truth.a1).abs())
            .max((fit.params.a2 - truth.a2).abs())
            .max((fit.params.b - truth.b).abs());
    }
    assert!(worst_piecewise <= 1e-9);

    // exact servo recovery: projectile with elastic bounce
    let gravity = 981.0;
    let mut worst_servo = 0.0f64;
    for _ in 0..100 {
        let vy = rng.random_range(450.0..800.0);
        let z0 = rng.random_range(15.0..35.0);
        let vz0 = rng.random_range(-20.0..60.0);
        let x0 = rng.random_range(-40.0..40.0);
        let vx = rng.random_range(-80.0..80.0);
        let samples: Vec<(f64, [f64; 3])> = (0..12)
            .map(|i| {
                let t = i as f64 * 0.01;
                (
                    t,
                    [
                        x0 + vx * t,
                        137.0 - vy * t,
                        z0 + vz0 * t - 0.5 * gravity * t * t,
                    ],
                )
            })
            .collect();
        let estimate = fit_servo_estimate(&samples, None, -140.0).expect("servo fit");
        // closed-form strike of the planted flight
        let t_strike = 277.0 / vy;
        let x_expected = x0 + vx * t_strike;
        let disc = (vz0 * vz0 + 2.0 * gravity * z0).sqrt();
        let t_bounce = (vz0 + disc) / gravity;
        let z_expected = if t_bounce < t_strike {
            let tau = t_strike - t_bounce;
            disc * tau - 0.5 * gravity * tau * tau
        } else {
            z0 + vz0 * t_strike - 0.5 * gravity * t_strike * t_strike
        };
        worst_servo = worst_servo
            .max((estimate.strike_point.0 - x_expected).abs())
            .max((estimate.strike_point.1 - z_expected).abs());
    }
    assert!(
        worst_servo <= 1e-9,
        "servo recovery {worst_servo:.3e} > 1e-9"
    );

    // loss vs unit-step brute force
    let mut worst_loss = 0.0f64;
    for _ in 0..100 {
        let p = PiecewiseLinearXY::new(
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
            rng.random_range(-40.0..40.0),
        )
        .unwrap();
        let q = PiecewiseLinearXY::new(
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
            rng.random_range(-40.0..40.0),
        )
        .unwrap();
        let mut brute = 0.0;
        let mut y = 140;
        while y >= -10 {
            brute += (p.pre_line(y as f64) - q.pre_line(y as f64)).abs();
            y -= 1;
        }
        y = -70;
        while y >= -140 {
            brute += (p.post_line(y as f64) - q.post_line(y as f64)).abs();
            y -= 1;
        }
        worst_loss = worst_loss.max((trajectory_loss(&p, &q, 1.0).unwrap() - brute).abs());
    }
    assert!(
        worst_loss <= 1e-10,
        "loss deviation {worst_loss:.3e} > 1e-10"
    );

    // the dataset path reproduces generating parameters through the refit
    let mut noiseless = standard_generator(2025);
    noiseless.segment_count = 40;
    noiseless.ball_noise = 0.0;
    let (segments, _) = generate_dataset(&noiseless).unwrap();
    let mut worst_refit = 0.0f64;
    for segment in &segments {
        let fit = refit_truth(segment, 5).expect("refit");
        worst_refit = worst_refit
            .max((fit.params.a1 - segment.truth_params.a1).abs())
            .max((fit.params.a2 - segment.truth_params.a2).abs())
            .max((fit.params.b - segment.truth_params.b).abs());
    }
    assert!(worst_refit <= 1e-6);

    println!(
        "criterion 5 PASS: piecewise recovery ≤ 1e-9 (worst {worst_piecewise:.3e}), servo recovery ≤ 1e-9 (worst {worst_servo:.3e}), loss vs brute force ≤ 1e-10 (worst {worst_loss:.3e}), noiseless refit ≤ 1e-6 (worst {worst_refit:.3e})"
    );
}

#[test]
fn criterion_06_conformal_coverage_and_conservatism() {
    // exchangeable synthetic draws at both miscoverage levels
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let noise: Normal<f64> = Normal::new(0.0, 12.0).unwrap();
    for alpha in [0.1, 0.2] {
        let trials = 2000usize;
        let mut covered = 0usize;
        for _ in 0..trials {
            let scores: Vec<f64> = (0..150).map(|_| noise.sample(&mut rng).abs()).collect();
            let calibration = ConformalCalibration::new(scores, alpha).unwrap();
            let fresh: f64 = noise.sample(&mut rng).abs();
            if fresh <= calibration.quantile() {
                covered += 1;
            }
        }
        let coverage = covered as f64 / trials as f64;
        assert!(
            coverage >= 1.0 - alpha - 0.03,
            "coverage {coverage:.4} under-shoots 1−{alpha} by more than 3%"
        );
        println!(
            "criterion 6 coverage at alpha={alpha}: {coverage:.4} ≥ {:.2} − 0.03",
            1.0 - alpha
        );
    }

    // conformal width must exceed the ensemble-stddev-implied width on the
    // same benchmark data
    let dataset = build_dataset(&standard_generator(2026));
    let predictor = fit_knn(&dataset.train);
    let scores: Vec<f64> = dataset
        .calibration
        .iter()
        .map(|s| strike_error(&predictor, s, 0))
        .collect();
    let calibration = ConformalCalibration::new(scores, 0.1).unwrap();
    let conformal_width = 2.0 * calibration.quantile();

    let members = knn_fold_members(&dataset.train, 5, 8, 10, &[1, 10, 20]).unwrap();
    let mut stddev_sum = 0.0;
    for segment in &dataset.test {
        let params: Vec<PiecewiseLinearXY> = members
            .iter()
            .map(|m| m.predict_row(segment, 0).unwrap())
            .collect();
        stddev_sum += ensemble_strike_stddev(&params, -140.0).unwrap();
    }
    let ensemble_width = 2.0 * stddev_sum / dataset.test.len() as f64;
    assert!(
        conformal_width > ensemble_width,
        "conformal width {conformal_width:.2} not above ensemble width {ensemble_width:.2}"
    );
    println!(
        "criterion 6 PASS: coverage holds at alpha ∈ {{0.1, 0.2}} (±3%), conformal width {conformal_width:.1} cm > ensemble width {ensemble_width:.1} cm"
    );
}

#[test]
fn criterion_07_horizon_monotonicity() {
    let dataset = build_dataset(&standard_generator(2027));
    let knn = fit_knn(&dataset.train);
    let median_at = |row: usize| -> f64 {
        let errors: Vec<f64> = dataset
            .test
            .iter()
            .map(|s| strike_error(&knn, s, row))
            .collect();
        median(&errors).unwrap()
    };
    let frame1 = median_at(1);
    let frame10 = median_at(10);
    assert!(
        frame1 < frame10,
        "kNN median at frame 1 ({frame1:.2}) not below frame 10 ({frame10:.2})"
    );

    // linear-σ noisy oracle: median error vs frame is strongly monotone
    let oracle = PredictorModel::NoisyOracle(NoisyOracle::linear(1.0, 2027));
    let mut medians = Vec::new();
    for row in 0..30usize {
        let errors: Vec<f64> = dataset
            .test
            .iter()
            .map(|s| strike_error(&oracle, s, row))
            .collect();
        medians.push(median(&errors).unwrap());
    }
    let frames: Vec<f64> = (0..30).map(|f| f as f64).collect();
    let rho = spearman(&frames, &medians);
    assert!(rho > 0.9, "Spearman ρ {rho:.3} ≤ 0.9");
    println!(
        "criterion 7 PASS: kNN median error frame 1 {frame1:.2} < frame 10 {frame10:.2}; noisy-oracle Spearman ρ {rho:.3} > 0.9"
    );
}

#[test]
fn criterion_08_controller_ordering() {
    let robot = RobotSetup::standard();
    let table = TableGeometry::default();
    let sim = SimConfig::default();

    // (a) exact-oracle anticipation vs servo-only, five seeds
    let mut a_wins = 0;
    let mut a_detail = Vec::new();
    for seed in 0..5u64 {
        let dataset = build_dataset(&standard_generator(3000 + seed));
        let oracle = PredictorModel::NoisyOracle(NoisyOracle::exact());
        let outcomes = run_benchmark(
            &dataset.test,
            &[
                ControllerPolicy::servo_only(),
                ControllerPolicy::anticipatory(1.0, 1.0),
            ],
            Some(&oracle),
            &robot,
            &table,
            &sim,
        )
        .unwrap();
        let servo = outcomes[0].table.all.hits;
        let anticipatory = outcomes[1].table.all.hits;
        if anticipatory as f64 >= servo as f64 * 1.03 {
            a_wins += 1;
        }
        a_detail.push(format!(
            "seed {seed}: servo {servo}, anticipatory {anticipatory}"
        ));
    }
    assert!(
        a_wins >= 3,
        "anticipatory ≥ 3% over servo in only {a_wins}/5 seeds: {a_detail:?}"
    );

    // (b) center-biased predictor: uncertainty-aware gating vs basic
    let mut b_wins = 0;
    let mut b_detail = Vec::new();
    for seed in 0..5u64 {
        let dataset = build_dataset(&skewed_generator(4000 + seed));
        let knn = fit_knn(&dataset.train);
        // precondition of the scenario: left-region predictions skew toward
        // the center-right region
        let mut gated = 0usize;
        let mut left = 0usize;
        for segment in &dataset.test {
            if table.region_of(segment.strike_point.x).unwrap() == Region::Left {
                left += 1;
                let predicted = knn.predict_row(segment, 20).unwrap().strike_x(-140.0);
                if predicted > -25.0 {
                    gated += 1;
                }
            }
        }
        assert!(
            gated * 2 > left,
            "seed {seed}: left-region predictions do not skew center-right ({gated}/{left})"
        );
        let outcomes = run_benchmark(
            &dataset.test,
            &[
                ControllerPolicy::anticipatory(1.0, 1.0),
                ControllerPolicy::uncertainty_aware(0.6, 1.0),
            ],
            Some(&knn),
            &robot,
            &table,
            &sim,
        )
        .unwrap();
        let basic = outcomes[0].table.all.hits;
        let aware = outcomes[1].table.all.hits;
        if aware >= basic {
            b_wins += 1;
        }
        b_detail.push(format!(
            "seed {seed}: basic {basic}, uncertainty-aware {aware}"
        ));
    }
    assert!(
        b_wins >= 3,
        "uncertainty-aware ≥ basic in only {b_wins}/5 seeds: {b_detail:?}"
    );
    println!(
        "criterion 8 PASS: (a) anticipatory ≥ +3% hits over servo in {a_wins}/5 seeds {a_detail:?}; (b) uncertainty-aware ≥ basic in {b_wins}/5 seeds {b_detail:?}"
    );
}

#[test]
fn criterion_09_zero_alpha_equivalence() {
    let mut generator = standard_generator(2029);
    generator.segment_count = 260;
    let (segments, _) = generate_dataset(&generator).unwrap();
    let robot = RobotSetup::standard();
    let table = TableGeometry::default();
    let sim = SimConfig::default();
    let oracle = PredictorModel::NoisyOracle(NoisyOracle::exact());
    for segment in &segments {
        let servo = run_trial(
            segment,
            &ControllerPolicy::servo_only(),
            None,
            &robot.chain,
            &robot.limits,
            &table,
            &sim,
        )
        .unwrap();
        let zeroed = run_trial(
            segment,
            &ControllerPolicy::anticipatory(0.0, 0.0),
            Some(&oracle),
            &robot.chain,
            &robot.limits,
            &table,
            &sim,
        )
        .unwrap();
        assert_eq!(servo.result.hit, zeroed.result.hit);
        assert_eq!(
            servo.result.end_distance_to_goal,
            zeroed.result.end_distance_to_goal
        );
        assert_eq!(servo.result.joint_trace, zeroed.result.joint_trace);
    }
    println!(
        "criterion 9 PASS: anticipatory at α1 = α2 = 0 produced trial traces identical to servo-only on {} segments",
        segments.len()
    );
}

#[test]
fn sim_invariant_monotone_information() {
    // more lead time with perfect information never hurts
    let dataset = build_dataset(&standard_generator(2030));
    let robot = RobotSetup::standard();
    let table = TableGeometry::default();
    let sim = SimConfig::default();
    let oracle = PredictorModel::NoisyOracle(NoisyOracle::exact());
    let outcomes = run_benchmark(
        &dataset.test,
        &[
            ControllerPolicy {
                id: "late".into(),
                kind: strikesim_core::sim::PolicyKind::Anticipatory,
                alpha1: 0.0,
                alpha2: 1.0,
            },
            ControllerPolicy::anticipatory(1.0, 1.0),
        ],
        Some(&oracle),
        &robot,
        &table,
        &sim,
    )
    .unwrap();
    let late = outcomes[0].table.all.hits;
    let early = outcomes[1].table.all.hits;
    assert!(
        early >= late,
        "earlier perfect information lost hits: α1=1 {early} vs α1=0 {late}"
    );
    println!("sim invariant PASS: oracle hits with α1=1 ({early}) ≥ with α1=0 ({late})");
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let rank = |values: &[f64]| -> Vec<f64> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let mut ranks = vec![0.0; values.len()];
        for (rank_index, &original) in order.iter().enumerate() {
            ranks[original] = rank_index as f64;
        }
        ranks
    };
    let rx = rank(x);
    let ry = rank(y);
    let n = rx.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for i in 0..rx.len() {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean).powi(2);
        dy += (ry[i] - mean).powi(2);
    }
    num / (dx * dy).sqrt()
}

#[test]
fn filter_sanity_for_the_acceptance_pipeline() {
    // the refit path in criterion 5 depends on the affine-preserving filter
    let ramp: Vec<[f64; 2]> = (0..50).map(|i| [1.5 * i as f64 - 3.0, 7.0]).collect();
    let filtered = lowpass_filter(&ramp, 5).unwrap();
    for (a, b) in ramp.iter().zip(&filtered) {
        assert!((a[0] - b[0]).abs() < 1e-12);
        assert!((a[1] - b[1]).abs() < 1e-12);
    }
}
