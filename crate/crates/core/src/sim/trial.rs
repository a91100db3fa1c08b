//! One interception trial: replay a segment against one controller policy.

use super::config::SimConfig;
use super::SimError;
use crate::metrics::TrialResult;
use crate::predictor::{PredictorModel, PREDICTION_ROWS};
use crate::robot::{
    constrain_velocity, max_speed_scale, min_norm_joint_velocity, spatial_jacobian, step_joints,
    JointLimits, JointState, KinematicChain, DOF,
};
use crate::segment::Segment;
use crate::spatial::TableGeometry;
use crate::trajectory::{detect_bounce_index, fit_servo_estimate};
use crate::uncertainty::{confidence_to_alpha, AlphaPolicy, Phase};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

const FRAME_DT: f64 = 0.01;

/// Which pre-hit behavior a controller uses. The visual servoing backend
/// from `servo_start` onward is identical for all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    ServoOnly,
    Anticipatory,
    UncertaintyAware,
}

impl PolicyKind {
    fn alpha_policy(&self) -> AlphaPolicy {
        match self {
            PolicyKind::ServoOnly => AlphaPolicy::Baseline,
            PolicyKind::Anticipatory => AlphaPolicy::BasicAnticipatory,
            PolicyKind::UncertaintyAware => AlphaPolicy::UncertaintyAware,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerPolicy {
    pub id: String,
    pub kind: PolicyKind,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl ControllerPolicy {
    pub fn servo_only() -> Self {
        Self {
            id: "servo_only".into(),
            kind: PolicyKind::ServoOnly,
            alpha1: 0.0,
            alpha2: 0.0,
        }
    }

    pub fn anticipatory(alpha1: f64, alpha2: f64) -> Self {
        Self {
            id: "anticipatory".into(),
            kind: PolicyKind::Anticipatory,
            alpha1,
            alpha2,
        }
    }

    pub fn uncertainty_aware(alpha1: f64, alpha2: f64) -> Self {
        Self {
            id: "uncertainty_aware".into(),
            kind: PolicyKind::UncertaintyAware,
            alpha1,
            alpha2,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for alpha in [self.alpha1, self.alpha2] {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(SimError::InvalidConfig(format!(
                    "alpha {alpha} outside [0, 1] in policy '{}'",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GoalKind {
    Anticipatory,
    Servo,
}

/// One goal issuance, for handoff and latency audits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalEvent {
    pub timestep: i32,
    pub kind: GoalKind,
    pub goal: [f64; 3],
    pub alpha: f64,
    /// Largest observation index the goal depended on (post-hit samples);
    /// None for anticipatory goals, whose row index encodes the same bound.
    pub latest_observation: Option<usize>,
    pub prediction_row: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutput {
    pub result: TrialResult,
    pub goal_events: Vec<GoalEvent>,
    /// Joint states sampled at command boundaries (velocities realized over
    /// each 0.1 s window); the envelope audit runs on this trace.
    pub command_trace: Vec<JointState>,
}

pub fn run_trial(
    segment: &Segment,
    policy: &ControllerPolicy,
    predictor: Option<&PredictorModel>,
    chain: &KinematicChain,
    limits: &JointLimits,
    table: &TableGeometry,
    config: &SimConfig,
) -> Result<TrialOutput, SimError> {
    config.validate()?;
    policy.validate()?;
    if policy.kind != PolicyKind::ServoOnly && predictor.is_none() {
        return Err(SimError::MissingPredictor(policy.id.clone()));
    }
    let crossing_time =
        segment
            .crossing_time(table.strike_plane_y)
            .ok_or_else(|| SimError::BadSegment {
                id: segment.id.clone(),
                message: "no strike-plane crossing".into(),
            })?;
    let crossing_frames = crossing_time / FRAME_DT;

    let period = config.command_period as i32;
    let start = config.anticipatory_start;
    let command_dt = config.command_dt();

    let mut theta = chain.ready_positions;
    limits
        .check_positions(&theta, 1e-9)
        .map_err(SimError::Robot)?;
    let mut command = [0.0; DOF];
    let mut goal: Option<[f64; 3]> = None;
    let mut alpha = 0.0f64;
    let mut window_start_theta = theta;
    let mut window_velocity = [0.0; DOF];

    let mut joint_trace = vec![JointState {
        positions: theta,
        velocities: [0.0; DOF],
        time: start as f64 * FRAME_DT,
    }];
    let mut command_trace = vec![JointState {
        positions: theta,
        velocities: [0.0; DOF],
        time: start as f64 * FRAME_DT,
    }];
    let mut goal_events = Vec::new();

    let is_boundary = |t: i32| -> bool {
        if t >= 0 || config.continuous_prehit {
            t % period == 0
        } else {
            t == start
        }
    };

    let mut t = start;
    while (t as f64) < crossing_frames {
        if is_boundary(t) {
            if t > start {
                for i in 0..DOF {
                    window_velocity[i] = (theta[i] - window_start_theta[i]) / command_dt;
                }
                command_trace.push(JointState {
                    positions: theta,
                    velocities: window_velocity,
                    time: t as f64 * FRAME_DT,
                });
            }
            window_start_theta = theta;

            if let Some(event) = issue_goal(segment, policy, predictor, table, config, t)? {
                goal = Some(event.goal);
                alpha = event.alpha;
                goal_events.push(event);
            }

            command = compute_command(
                chain,
                limits,
                config,
                &theta,
                &window_velocity,
                goal.as_ref(),
                alpha,
            )?;
        }

        let remaining = crossing_frames - t as f64;
        let step_fraction = remaining.min(1.0);
        let step = step_joints(&theta, &command, 1.0, limits, step_fraction * FRAME_DT)
            .map_err(SimError::Robot)?;
        theta = step.positions;
        joint_trace.push(JointState {
            positions: theta,
            velocities: step.realized_velocities,
            time: (t as f64 + step_fraction) * FRAME_DT,
        });
        t += 1;
    }

    let paddle = chain
        .forward_kinematics(&theta, Some(limits))
        .map_err(SimError::Robot)?;
    let ball = segment
        .ball_at(crossing_time)
        .ok_or_else(|| SimError::BadSegment {
            id: segment.id.clone(),
            message: "ball position unavailable at crossing".into(),
        })?;
    let distance =
        ((paddle.position.x - ball[0]).powi(2) + (paddle.position.z - ball[2]).powi(2)).sqrt();
    let hit = distance <= config.paddle_radius;

    Ok(TrialOutput {
        result: TrialResult {
            segment_id: segment.id.clone(),
            controller_id: policy.id.clone(),
            hit,
            end_distance_to_goal: distance,
            joint_trace,
        },
        goal_events,
        command_trace,
    })
}

/// Goal selection at a command boundary, honoring the observation latency.
fn issue_goal(
    segment: &Segment,
    policy: &ControllerPolicy,
    predictor: Option<&PredictorModel>,
    table: &TableGeometry,
    config: &SimConfig,
    t: i32,
) -> Result<Option<GoalEvent>, SimError> {
    if t < config.servo_start {
        if policy.kind == PolicyKind::ServoOnly {
            return Ok(None);
        }
        let phase = if t < 0 { Phase::PreHit } else { Phase::AtHit };
        let row = ((-t).max(0) as usize + config.latency).min(PREDICTION_ROWS - 1);
        let predictor = predictor.expect("checked in run_trial");
        let params = predictor.predict_row(segment, row)?;
        let strike_x = params.strike_x(table.strike_plane_y);
        let region = table
            .region_of(strike_x)
            .map_err(|e| SimError::InvalidConfig(e.to_string()))?;
        let alpha = confidence_to_alpha(
            policy.kind.alpha_policy(),
            phase,
            region,
            policy.alpha1,
            policy.alpha2,
        );
        if alpha <= 0.0 {
            // gated out: report the decision as a zero-speed event so the
            // trace still shows when predictions were consulted
            return Ok(Some(GoalEvent {
                timestep: t,
                kind: GoalKind::Anticipatory,
                goal: [strike_x, table.strike_plane_y, config.pre_hit_z_goal],
                alpha: 0.0,
                latest_observation: None,
                prediction_row: Some(row),
            }));
        }
        return Ok(Some(GoalEvent {
            timestep: t,
            kind: GoalKind::Anticipatory,
            goal: [strike_x, table.strike_plane_y, config.pre_hit_z_goal],
            alpha,
            latest_observation: None,
            prediction_row: Some(row),
        }));
    }

    // servoing: fit curves to the latency-delayed observation prefix
    let available = t - config.latency as i32;
    if available < 0 {
        return Ok(None);
    }
    let count = ((available as usize) + 1).min(segment.post_hit_ball.len());
    if count < config.min_servo_samples {
        return Ok(None);
    }
    let samples: Vec<(f64, [f64; 3])> = segment.post_hit_ball[..count]
        .iter()
        .enumerate()
        .map(|(i, p)| (i as f64 * FRAME_DT, *p))
        .collect();
    let bounce = detect_bounce_index(&segment.post_hit_ball[..count], config.ball_radius);
    match fit_servo_estimate(&samples, bounce, table.strike_plane_y) {
        Ok(estimate) => Ok(Some(GoalEvent {
            timestep: t,
            kind: GoalKind::Servo,
            goal: [
                estimate.strike_point.0,
                table.strike_plane_y,
                estimate.strike_point.1,
            ],
            alpha: 1.0,
            latest_observation: Some(count - 1),
            prediction_row: None,
        })),
        // not enough curvature information yet: hold the previous goal
        Err(_) => Ok(None),
    }
}

/// Workspace direction → envelope-saturating joint command, α-scaled, then
/// β-constrained against the previous window's realized velocities.
///
/// The minimum-norm solve runs in SI units (prismatic columns expressed in
/// cm per m/s): with metre-scale links, radians and metres are
/// commensurate, so the pseudoinverse trades base translation against arm
/// rotation sensibly instead of burning slow arm joints to spare the base.
fn compute_command(
    chain: &KinematicChain,
    limits: &JointLimits,
    config: &SimConfig,
    theta: &[f64; DOF],
    previous_velocity: &[f64; DOF],
    goal: Option<&[f64; 3]>,
    alpha: f64,
) -> Result<[f64; DOF], SimError> {
    const CM_PER_M: f64 = 100.0;
    let desired = match goal {
        Some(goal) if alpha > 0.0 => {
            let pose = chain
                .forward_kinematics(theta, Some(limits))
                .map_err(SimError::Robot)?;
            let error = Vector3::from(*goal) - pose.position;
            let distance = error.norm();
            if distance < 1e-9 {
                [0.0; DOF]
            } else {
                let speed = config.nominal_speed.min(config.approach_gain * distance);
                let task = error / distance * speed;
                let mut jacobian =
                    spatial_jacobian(chain, theta, Some(limits)).map_err(SimError::Robot)?;
                for (col, joint) in chain.joints.iter().enumerate() {
                    if joint.kind == crate::robot::JointKind::Prismatic {
                        let scaled = jacobian.column(col) * CM_PER_M;
                        jacobian.set_column(col, &scaled);
                    }
                }
                let raw = min_norm_joint_velocity(&jacobian, &task).joint_velocities;
                let mut command = [0.0; DOF];
                for (i, joint) in chain.joints.iter().enumerate() {
                    command[i] = if joint.kind == crate::robot::JointKind::Prismatic {
                        raw[i] * CM_PER_M
                    } else {
                        raw[i]
                    };
                }
                let envelope = max_speed_scale(&command, limits);
                for value in command.iter_mut() {
                    *value *= alpha * envelope;
                }
                command
            }
        }
        _ => [0.0; DOF],
    };
    let (constrained, _beta) =
        constrain_velocity(&desired, previous_velocity, limits, config.command_dt())
            .map_err(SimError::Robot)?;
    Ok(constrained)
}
