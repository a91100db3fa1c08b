//! Candidate segment construction from a sampled intent.

use super::swing::build_pre_hit_scene;
use super::{derive_rng, GenError, GeneratorConfig, OpponentIntent};
use crate::segment::{Segment, StrikePoint, SEGMENT_SCHEMA_VERSION};
use crate::spatial::Region;
use crate::state::{GameState, PaddlePose};
use crate::trajectory::PiecewiseLinearXY;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Where the opponent contacts the ball, on their table edge.
pub(crate) const HIT_Y: f64 = 137.0;
pub(crate) const FRAME_DT: f64 = 0.01;

/// Exact post-hit physics of one candidate, kept alongside the sampled
/// path for validity checks and ground-truth bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallFlight {
    pub v_y: f64,
    pub z_hit: f64,
    pub vz0: f64,
    pub t_bounce: f64,
    pub bounce_x: f64,
    pub t_cross: f64,
    pub second_bounce_time: f64,
    pub strike_z: f64,
}

/// One raw pre-hit frame; pose or paddle may have dropped out.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateFrame {
    pub pose: Option<[[f64; 3]; 8]>,
    pub paddle: Option<PaddlePose>,
    pub ball: [f64; 3],
    pub timestep: i32,
}

/// A fully formed candidate, before validity filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSegment {
    pub pre_hit: Vec<CandidateFrame>,
    pub post_hit_ball: Vec<[f64; 3]>,
    pub truth: PiecewiseLinearXY,
    pub intent: OpponentIntent,
    pub flight: BallFlight,
}

/// Draw of the latent quantities a swing telegraphs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct IntentDraw {
    pub strike_x: f64,
    pub spin_delta: f64,
    pub hit_x: f64,
}

pub(crate) fn sample_region(rng: &mut ChaCha8Rng, weights: &[f64; 3]) -> Region {
    let total: f64 = weights.iter().sum();
    let draw = rng.random_range(0.0..total);
    if draw < weights[0] {
        Region::Left
    } else if draw < weights[0] + weights[1] {
        Region::Center
    } else {
        Region::Right
    }
}

/// Strike-x bands stay 1 cm clear of the ±25 region boundaries so the
/// configured mix is exact by construction.
fn strike_band(region: Region) -> (f64, f64) {
    match region {
        Region::Left => (-70.0, -26.0),
        Region::Center => (-24.0, 24.0),
        Region::Right => (26.0, 70.0),
    }
}

pub(crate) fn sample_intent_draw(rng: &mut ChaCha8Rng, config: &GeneratorConfig) -> IntentDraw {
    let region = sample_region(rng, &config.region_weights);
    let (lo, hi) = strike_band(region);
    let strike_x = rng.random_range(lo..hi);
    let spin_delta = rng.random_range(config.spin_delta_range.0..config.spin_delta_range.1);
    // players mostly return from the side the ball will go to
    let hit_x = 0.5 * strike_x + rng.random_range(-30.0..30.0);
    IntentDraw {
        strike_x,
        spin_delta,
        hit_x,
    }
}

/// Deterministically generate the candidate for one (seed, index) slot.
pub fn generate_candidate(config: &GeneratorConfig, index: u64) -> CandidateSegment {
    let mut rng = derive_rng(config.seed, index);
    let truth_draw = sample_intent_draw(&mut rng, config);
    // always consume the decoy draw so the stream layout is predictable
    let decoy_draw = sample_intent_draw(&mut rng, config);
    let bounce_y = rng.random_range(config.bounce_y_range.0..config.bounce_y_range.1);
    let v_y = rng.random_range(config.ball_speed.0..config.ball_speed.1);
    let z_hit = rng.random_range(15.0..35.0);
    let swing_amplitude =
        rng.random_range(config.swing_amplitude_range.0..config.swing_amplitude_range.1);

    let intent = OpponentIntent {
        target_strike_x: truth_draw.strike_x,
        bounce_y,
        spin_delta: truth_draw.spin_delta,
        swing_amplitude,
        sigma_obs: config.sigma_obs,
    };

    // solve the piecewise-linear parameters pinned by (strike_x, spin, hit_x):
    //   pre line through the hit point, post line through the strike point,
    //   shared intercept at y = 0
    let a2 = (truth_draw.hit_x + HIT_Y * truth_draw.spin_delta - truth_draw.strike_x)
        / (HIT_Y - (-140.0));
    let a1 = a2 - truth_draw.spin_delta;
    let b = truth_draw.strike_x + 140.0 * a2;
    let truth = PiecewiseLinearXY { a1, a2, b };

    // vertical flight hits the table exactly at bounce_y
    let t_bounce = (HIT_Y - bounce_y) / v_y;
    let gravity = config.gravity;
    let vz0 = (0.5 * gravity * t_bounce * t_bounce - z_hit) / t_bounce;
    let v_out = config.restitution * (gravity * t_bounce - vz0);
    let t_cross = (HIT_Y + 140.0) / v_y;
    let second_bounce_time = t_bounce + 2.0 * v_out / gravity;
    let tau_cross = t_cross - t_bounce;
    let strike_z = v_out * tau_cross - 0.5 * gravity * tau_cross * tau_cross;
    let flight = BallFlight {
        v_y,
        z_hit,
        vz0,
        t_bounce,
        bounce_x: truth.post_line(bounce_y),
        t_cross,
        second_bounce_time,
        strike_z,
    };

    let frame_count = (t_cross / FRAME_DT).ceil() as usize + 3;
    let noise = Normal::new(0.0, config.ball_noise.max(1e-300)).expect("valid noise scale");
    let post_hit_ball: Vec<[f64; 3]> = (0..frame_count)
        .map(|i| {
            let t = i as f64 * FRAME_DT;
            let y = HIT_Y - v_y * t;
            let x = if t < t_bounce {
                truth.pre_line(y)
            } else {
                truth.post_line(y)
            };
            let z = if t < t_bounce {
                z_hit + vz0 * t - 0.5 * gravity * t * t
            } else {
                let tau = t - t_bounce;
                v_out * tau - 0.5 * gravity * tau * tau
            };
            if config.ball_noise > 0.0 {
                [
                    x + noise.sample(&mut rng),
                    y + noise.sample(&mut rng),
                    z + noise.sample(&mut rng),
                ]
            } else {
                [x, y, z]
            }
        })
        .collect();

    // the pre-hit scene telegraphs a predictability-weighted blend of the
    // true intent and an independent decoy
    let p = config.predictability;
    let telegraphed = IntentDraw {
        strike_x: p * truth_draw.strike_x + (1.0 - p) * decoy_draw.strike_x,
        spin_delta: p * truth_draw.spin_delta + (1.0 - p) * decoy_draw.spin_delta,
        hit_x: p * truth_draw.hit_x + (1.0 - p) * decoy_draw.hit_x,
    };
    let pre_hit = build_pre_hit_scene(&mut rng, config, &telegraphed, swing_amplitude, z_hit);

    CandidateSegment {
        pre_hit,
        post_hit_ball,
        truth,
        intent,
        flight,
    }
}

/// Interpolate dropouts, low-pass filter the pre-hit signals, and assemble
/// the final segment.
pub fn finalize_candidate(
    candidate: &CandidateSegment,
    config: &GeneratorConfig,
    id: &str,
) -> Result<Segment, GenError> {
    let frames = fill_and_filter(&candidate.pre_hit, config.filter_window)?;
    let segment = Segment {
        version: SEGMENT_SCHEMA_VERSION,
        id: id.to_string(),
        frames,
        post_hit_ball: candidate.post_hit_ball.clone(),
        hit_index: candidate.pre_hit.len() - 1,
        truth_params: candidate.truth,
        strike_point: StrikePoint {
            x: candidate.intent.target_strike_x,
            z: candidate.flight.strike_z,
        },
        fit_tolerance: 1e-9,
    };
    Ok(segment)
}

/// Fill pose/paddle dropouts from the nearest observed frames, then apply
/// the zero-phase low pass to every pre-hit position signal. Paddle
/// rotations are taken from the nearest observed frame and stay unfiltered
/// so they remain orthonormal.
fn fill_and_filter(
    raw: &[CandidateFrame],
    filter_window: usize,
) -> Result<Vec<GameState>, GenError> {
    let n = raw.len();
    let nearest_pose = |i: usize| -> [[f64; 3]; 8] {
        for d in 0..n {
            if i >= d {
                if let Some(p) = raw[i - d].pose {
                    return p;
                }
            }
            if i + d < n {
                if let Some(p) = raw[i + d].pose {
                    return p;
                }
            }
        }
        unreachable!("validity filter guarantees at least one pose frame");
    };
    let nearest_paddle = |i: usize| -> PaddlePose {
        for d in 0..n {
            if i >= d {
                if let Some(p) = raw[i - d].paddle {
                    return p;
                }
            }
            if i + d < n {
                if let Some(p) = raw[i + d].paddle {
                    return p;
                }
            }
        }
        unreachable!("validity filter guarantees at least one paddle frame");
    };

    let poses: Vec<[[f64; 3]; 8]> = (0..n).map(nearest_pose).collect();
    let paddles: Vec<PaddlePose> = (0..n).map(nearest_paddle).collect();

    // one 39-wide position signal per frame: 24 pose + 3 paddle translation
    // + 3 ball, filtered together; rotations bypass the filter
    let mut signal: Vec<[f64; 30]> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = [0.0; 30];
        let mut k = 0;
        for joint in &poses[i] {
            row[k..k + 3].copy_from_slice(joint);
            k += 3;
        }
        row[k..k + 3].copy_from_slice(&paddles[i].translation);
        k += 3;
        row[k..k + 3].copy_from_slice(&raw[i].ball);
        signal.push(row);
    }
    let window = filter_window.min(if n % 2 == 1 { n } else { n - 1 });
    let filtered = crate::geometry::lowpass_filter(&signal, window)?;

    (0..n)
        .map(|i| {
            let row = &filtered[i];
            let mut pose = [[0.0; 3]; 8];
            for (j, joint) in pose.iter_mut().enumerate() {
                joint.copy_from_slice(&row[j * 3..j * 3 + 3]);
            }
            let mut translation = [0.0; 3];
            translation.copy_from_slice(&row[24..27]);
            let mut ball = [0.0; 3];
            ball.copy_from_slice(&row[27..30]);
            GameState::new(
                pose,
                PaddlePose {
                    rotation: paddles[i].rotation,
                    translation,
                },
                ball,
                raw[i].timestep,
            )
            .map_err(|e| GenError::InvalidConfig(format!("frame build failed: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simgen::validity_filter;
    use crate::spatial::TableGeometry;
    use approx::assert_abs_diff_eq;

    #[test]
    fn truth_params_satisfy_the_strike_constraint() {
        let config = GeneratorConfig::default();
        for index in 0..50u64 {
            let candidate = generate_candidate(&config, index);
            assert_abs_diff_eq!(
                candidate.truth.strike_x(-140.0),
                candidate.intent.target_strike_x,
                epsilon = 1e-9
            );
            // spin delta is the slope discontinuity
            assert_abs_diff_eq!(
                candidate.truth.a2 - candidate.truth.a1,
                candidate.intent.spin_delta,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn no_spin_fully_observable_case_is_degenerate() {
        let mut config = GeneratorConfig::default();
        config.spin_delta_range = (-1e-12, 1e-12);
        config.sigma_obs = 0.0;
        config.ball_noise = 0.0;
        let candidate = generate_candidate(&config, 3);
        assert_abs_diff_eq!(candidate.truth.a1, candidate.truth.a2, epsilon = 1e-9);
    }

    #[test]
    fn generation_is_deterministic() {
        let config = GeneratorConfig::default();
        let a = generate_candidate(&config, 11);
        let b = generate_candidate(&config, 11);
        assert_eq!(a, b);
        let table = TableGeometry::default();
        if validity_filter(&a, &config, &table).is_ok() {
            let seg_a = finalize_candidate(&a, &config, "seg-000011").unwrap();
            let seg_b = finalize_candidate(&b, &config, "seg-000011").unwrap();
            assert_eq!(seg_a.to_json().unwrap(), seg_b.to_json().unwrap());
        }
    }

    #[test]
    fn finalized_segment_validates() {
        let config = GeneratorConfig::default();
        let table = TableGeometry::default();
        let mut checked = 0;
        for index in 0..20u64 {
            let candidate = generate_candidate(&config, index);
            if validity_filter(&candidate, &config, &table).is_ok() {
                let segment = finalize_candidate(&candidate, &config, "seg-x").unwrap();
                segment.validate(&table).unwrap();
                checked += 1;
            }
        }
        assert!(checked > 10, "too many rejections: {checked}/20 accepted");
    }

    #[test]
    fn ball_path_is_continuous_at_the_hit() {
        let mut config = GeneratorConfig::default();
        config.ball_noise = 0.0;
        config.sigma_obs = 0.0;
        config.predictability = 1.0;
        let candidate = generate_candidate(&config, 7);
        // last pre-hit ball sample equals the first post-hit sample
        let last_pre = candidate.pre_hit.last().unwrap().ball;
        let first_post = candidate.post_hit_ball[0];
        for axis in 0..3 {
            assert_abs_diff_eq!(last_pre[axis], first_post[axis], epsilon = 1e-9);
        }
    }
}
