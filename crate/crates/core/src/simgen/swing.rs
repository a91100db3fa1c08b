//! Synthetic pre-hit scene: an 8-joint opponent whose backswing and paddle
//! face encode the telegraphed intent with increasing clarity toward the
//! hit, plus the incoming ball.

use super::generator::{CandidateFrame, IntentDraw, HIT_Y};
use super::GeneratorConfig;
use crate::state::PaddlePose;
use nalgebra::{Rotation3, Unit, Vector3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Build the raw pre-hit frames (timesteps −(L−1)..=0).
///
/// Intent enters only through `telegraphed`; with predictability 0 the
/// caller passes a decoy draw, making the scene independent of the actual
/// post-hit trajectory.
pub(crate) fn build_pre_hit_scene(
    rng: &mut ChaCha8Rng,
    config: &GeneratorConfig,
    telegraphed: &IntentDraw,
    swing_amplitude: f64,
    z_hit: f64,
) -> Vec<CandidateFrame> {
    let frame_count = config.pre_hit_frames;
    let x_code = telegraphed.strike_x / 70.0;
    let s_code = telegraphed.spin_delta / 0.25;
    let body_x = telegraphed.hit_x * 0.85;
    let ball_net_x = telegraphed.hit_x * 0.3 + rng.random_range(-20.0..20.0);
    let noise = Normal::new(0.0, config.sigma_obs.max(1e-300)).expect("valid noise scale");

    (0..frame_count)
        .map(|f| {
            let progress = f as f64 / (frame_count - 1) as f64;
            // information ramps in quadratically: early frames telegraph
            // little, the last frames telegraph the full swing geometry
            let ramp = progress * progress;
            let backswing = swing_amplitude * ramp;
            let arm_angle = 0.25 + backswing * (0.5 + 0.45 * x_code + 0.25 * s_code);
            let wrist_angle = 1.3 * arm_angle;

            let neck = [body_x, 160.0, 125.0];
            let shoulder = [body_x + 14.0, 158.0, 118.0];
            let elbow = [
                shoulder[0] + 28.0 * arm_angle.sin(),
                shoulder[1] - 6.0 * backswing,
                shoulder[2] - 28.0 * arm_angle.cos(),
            ];
            let wrist = [
                elbow[0] + 26.0 * wrist_angle.sin(),
                elbow[1] - 5.0 * backswing,
                elbow[2] - 26.0 * wrist_angle.cos(),
            ];
            let mut pose = [
                [body_x, 162.0, 140.0], // head
                neck,
                shoulder,
                elbow,
                wrist,
                [body_x - 14.0, 158.0, 118.0], // off shoulder
                [body_x, 158.0, 90.0],         // torso
                [body_x, 157.0, 55.0],         // hip
            ];

            let face_angle = 0.15 + (0.7 * s_code + 0.25 * x_code) * ramp;
            let tilt = 0.2 + 0.3 * backswing;
            let rotation =
                Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::z()), face_angle)
                    * Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::x()), tilt);
            let rotation_rows = {
                let m = rotation.matrix();
                [
                    [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
                    [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
                    [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
                ]
            };
            let mut paddle_translation = [
                wrist[0] + 6.0 * wrist_angle.sin(),
                wrist[1] - 4.0,
                wrist[2] - 6.0 * wrist_angle.cos(),
            ];

            // incoming ball: net crossing at the first frame, contact point
            // at the last; gentle arc in z
            let mut ball = [
                ball_net_x + (telegraphed.hit_x - ball_net_x) * progress,
                HIT_Y * progress,
                12.0 + (z_hit - 12.0) * progress + 8.0 * (std::f64::consts::PI * progress).sin(),
            ];

            if config.sigma_obs > 0.0 {
                for joint in pose.iter_mut() {
                    for value in joint.iter_mut() {
                        *value += noise.sample(rng);
                    }
                }
                for value in paddle_translation.iter_mut() {
                    *value += noise.sample(rng);
                }
                for value in ball.iter_mut() {
                    *value += noise.sample(rng);
                }
            }

            let pose_dropped = config.dropout_rate > 0.0 && rng.random_bool(config.dropout_rate);
            let paddle_dropped = config.dropout_rate > 0.0 && rng.random_bool(config.dropout_rate);

            CandidateFrame {
                pose: (!pose_dropped).then_some(pose),
                paddle: (!paddle_dropped).then_some(PaddlePose {
                    rotation: rotation_rows,
                    translation: paddle_translation,
                }),
                ball,
                timestep: f as i32 - (frame_count as i32 - 1),
            }
        })
        .collect()
}
