//! Direct trajectory estimation for visual servoing: per-coordinate
//! quadratic curves fit to observed post-hit ball positions, with an
//! elastic-bounce extrapolation before the bounce is observed.

use super::TrajectoryError;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Standard 40 mm ball: bounce detection threshold on the z signal.
pub const BALL_RADIUS_CM: f64 = 2.0;

/// Scalar coordinate as a function of time: c2·t² + c1·t + c0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticCurve {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl QuadraticCurve {
    pub fn new(c2: f64, c1: f64, c0: f64) -> Result<Self, TrajectoryError> {
        if !(c2.is_finite() && c1.is_finite() && c0.is_finite()) {
            return Err(TrajectoryError::NonFiniteParams);
        }
        Ok(Self { c2, c1, c0 })
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.c2 * t + self.c1) * t + self.c0
    }

    pub fn velocity(&self, t: f64) -> f64 {
        2.0 * self.c2 * t + self.c1
    }

    /// Least-squares fit through ≥ 3 samples.
    pub fn fit(samples: &[(f64, f64)]) -> Result<Self, TrajectoryError> {
        if samples.len() < 3 {
            return Err(TrajectoryError::InsufficientSamples {
                side: "quadratic",
                needed: 3,
                got: samples.len(),
            });
        }
        let mut design = DMatrix::zeros(samples.len(), 3);
        let mut target = DVector::zeros(samples.len());
        for (row, (t, value)) in samples.iter().enumerate() {
            design[(row, 0)] = t * t;
            design[(row, 1)] = *t;
            design[(row, 2)] = 1.0;
            target[row] = *value;
        }
        let svd = design.svd(true, true);
        let sol = svd
            .solve(&target, 1e-14)
            .map_err(|e| TrajectoryError::SolveFailed(e.to_string()))?;
        Self::new(sol[0], sol[1], sol[2])
    }

    /// Smallest root of eval(t) = value with t ≥ t_min, handling the
    /// near-linear case.
    fn first_crossing(&self, value: f64, t_min: f64) -> Option<f64> {
        let eps = 1e-12;
        if self.c2.abs() < eps {
            if self.c1.abs() < eps {
                return None;
            }
            let t = (value - self.c0) / self.c1;
            return (t >= t_min - 1e-9).then_some(t);
        }
        let a = self.c2;
        let b = self.c1;
        let c = self.c0 - value;
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        // numerically stable root pair
        let q = -0.5 * (b + b.signum() * sq);
        let mut roots = [q / a, if q.abs() > eps { c / q } else { f64::INFINITY }];
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots
            .into_iter()
            .find(|t| t.is_finite() && *t >= t_min - 1e-9)
    }
}

/// Pre/post-bounce quadratics per coordinate (x, y, z) plus the derived
/// strike point on the plane y = strike_plane_y.
#[derive(Debug, Clone, PartialEq)]
pub struct ServoEstimate {
    pub pre_bounce: [QuadraticCurve; 3],
    pub post_bounce: [QuadraticCurve; 3],
    pub bounce_time: f64,
    /// (x, z) where the active curve crosses the strike plane.
    pub strike_point: (f64, f64),
    /// True once the post-bounce curves are refit from observed samples
    /// rather than mirrored from the pre-bounce fit.
    pub post_refit: bool,
}

/// Index of the confirmed bounce sample in a ball position series, if any.
///
/// The bounce is the global z-minimum below the ball radius, confirmed by a
/// rising z on the following sample so a still-descending ball is never
/// mistaken for a bounce.
pub fn detect_bounce_index(ball: &[[f64; 3]], ball_radius: f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, p) in ball.iter().enumerate() {
        if p[2] < ball_radius && best.is_none_or(|b| p[2] < ball[b][2]) {
            best = Some(i);
        }
    }
    let idx = best?;
    (idx + 1 < ball.len() && ball[idx + 1][2] > ball[idx][2]).then_some(idx)
}

/// Fit the servoing estimate from timestamped ball positions.
///
/// `bounce_index` splits the samples into pre- and post-bounce groups; pass
/// `None` while no bounce has been observed. Until three post-bounce samples
/// exist, the post-bounce curves are derived from the pre-bounce fit by
/// mirroring the z velocity at the predicted table-contact time (elastic
/// collision); afterwards they are refit from data.
pub fn fit_servo_estimate(
    samples: &[(f64, [f64; 3])],
    bounce_index: Option<usize>,
    strike_plane_y: f64,
) -> Result<ServoEstimate, TrajectoryError> {
    let split = bounce_index.unwrap_or(samples.len()).min(samples.len());
    let (pre_samples, post_samples) = samples.split_at(split);
    if pre_samples.len() < 3 {
        return Err(TrajectoryError::InsufficientSamples {
            side: "pre-bounce",
            needed: 3,
            got: pre_samples.len(),
        });
    }

    let coord_samples = |group: &[(f64, [f64; 3])], axis: usize| -> Vec<(f64, f64)> {
        group.iter().map(|(t, p)| (*t, p[axis])).collect()
    };
    let pre = [
        QuadraticCurve::fit(&coord_samples(pre_samples, 0))?,
        QuadraticCurve::fit(&coord_samples(pre_samples, 1))?,
        QuadraticCurve::fit(&coord_samples(pre_samples, 2))?,
    ];

    let t_first = pre_samples[0].0;
    let (post, bounce_time, post_refit) = if post_samples.len() >= 3 {
        let post = [
            QuadraticCurve::fit(&coord_samples(post_samples, 0))?,
            QuadraticCurve::fit(&coord_samples(post_samples, 1))?,
            QuadraticCurve::fit(&coord_samples(post_samples, 2))?,
        ];
        (post, post_samples[0].0, true)
    } else {
        // predicted table contact: descending root of the pre-bounce z curve
        let t_b = pre[2].first_crossing(0.0, t_first).and_then(|t| {
            if pre[2].velocity(t) < 0.0 {
                Some(t)
            } else {
                // first crossing was the rising branch; try past its apex
                pre[2].first_crossing(0.0, t + 1e-9)
            }
        });
        match t_b {
            Some(t_b) => {
                let mirrored_z = mirror_z(&pre[2], t_b);
                ([pre[0], pre[1], mirrored_z], t_b, false)
            }
            None => {
                // ball never meets the table within the curve domain:
                // the pre-bounce curves carry all the way to the plane
                ([pre[0], pre[1], pre[2]], f64::INFINITY, false)
            }
        }
    };

    // choose the curve that is active when y reaches the strike plane
    let pre_crossing = pre[1].first_crossing(strike_plane_y, t_first);
    let strike_time_and_curves = match pre_crossing {
        Some(t) if t <= bounce_time => Some((t, &pre)),
        _ => post[1]
            .first_crossing(strike_plane_y, bounce_time.min(f64::MAX))
            .map(|t| (t, &post)),
    };
    let (t_strike, curves) =
        strike_time_and_curves.ok_or(TrajectoryError::NoStrikeCrossing(strike_plane_y))?;
    let strike_point = (curves[0].eval(t_strike), curves[2].eval(t_strike));
    if !(strike_point.0.is_finite() && strike_point.1.is_finite()) {
        return Err(TrajectoryError::NoStrikeCrossing(strike_plane_y));
    }

    Ok(ServoEstimate {
        pre_bounce: pre,
        post_bounce: post,
        bounce_time,
        strike_point,
        post_refit,
    })
}

/// Elastic reflection of a z curve at contact time: same curvature, flipped
/// velocity, zero height.
fn mirror_z(pre_z: &QuadraticCurve, t_b: f64) -> QuadraticCurve {
    let v_out = -pre_z.velocity(t_b);
    let c2 = pre_z.c2;
    // c2·(t−t_b)² + v_out·(t−t_b) expanded in absolute time
    QuadraticCurve {
        c2,
        c1: v_out - 2.0 * c2 * t_b,
        c0: c2 * t_b * t_b - v_out * t_b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const G: f64 = 981.0;

    /// Synthetic projectile: linear x/y, quadratic z bouncing elastically.
    fn projectile(t: f64, vy: f64, vz0: f64, z0: f64) -> [f64; 3] {
        let y = 137.0 - vy * t;
        let x = 10.0 - 0.1 * (137.0 - y);
        let z_free = z0 + vz0 * t - 0.5 * G * t * t;
        if z_free >= 0.0 {
            [x, y, z_free]
        } else {
            // elastic bounce at the first root
            let disc = (vz0 * vz0 + 2.0 * G * z0).sqrt();
            let t_b = (vz0 + disc) / G;
            let v_out = disc; // |v_z| at contact
            let tau = t - t_b;
            [x, y, v_out * tau - 0.5 * G * tau * tau]
        }
    }

    fn sample_series(n: usize, vy: f64, vz0: f64, z0: f64) -> Vec<(f64, [f64; 3])> {
        (0..n)
            .map(|i| {
                let t = i as f64 * 0.01;
                (t, projectile(t, vy, vz0, z0))
            })
            .collect()
    }

    #[test]
    fn noiseless_prebounce_recovery() {
        let samples = sample_series(12, 500.0, 50.0, 25.0);
        let est = fit_servo_estimate(&samples, None, -140.0).unwrap();
        assert_abs_diff_eq!(est.pre_bounce[2].c2, -0.5 * G, epsilon = 1e-6);
        assert_abs_diff_eq!(est.pre_bounce[2].c1, 50.0, epsilon = 1e-6);
        assert_abs_diff_eq!(est.pre_bounce[2].c0, 25.0, epsilon = 1e-6);
        // linear coordinates come back with ~zero curvature
        assert_abs_diff_eq!(est.pre_bounce[1].c2, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(est.pre_bounce[1].c1, -500.0, epsilon = 1e-6);
    }

    #[test]
    fn elastic_mirror_flips_z_velocity() {
        // drop height chosen so the contact velocity is exactly -300 cm/s
        let c0 = 0.5 * G * (300.0 / G) * (300.0 / G);
        let pre = QuadraticCurve::new(-0.5 * G, 0.0, c0).unwrap();
        let t_b = pre.first_crossing(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(pre.velocity(t_b), -300.0, epsilon = 1e-9);
        let post = mirror_z(&pre, t_b);
        assert_abs_diff_eq!(post.velocity(t_b), 300.0, epsilon = 1e-9);
        assert_abs_diff_eq!(post.eval(t_b), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn extrapolated_estimate_matches_closed_form_strike() {
        // strike plane reached after the bounce; closed-form root oracle
        let vy = 550.0;
        let z0 = 25.0;
        let vz0 = 30.0;
        let samples = sample_series(10, vy, vz0, z0);
        let est = fit_servo_estimate(&samples, None, -140.0).unwrap();
        assert!(!est.post_refit);

        let t_strike = 277.0 / vy; // y(t) = 137 − vy·t = −140
        let x_expected = 10.0 - 0.1 * vy * t_strike;
        let disc = (vz0 * vz0 + 2.0 * G * z0).sqrt();
        let t_b = (vz0 + disc) / G;
        assert!(t_b < t_strike, "bounce must precede the plane crossing");
        let tau = t_strike - t_b;
        let z_expected = disc * tau - 0.5 * G * tau * tau;
        assert_abs_diff_eq!(est.strike_point.0, x_expected, epsilon = 1e-6);
        assert_abs_diff_eq!(est.strike_point.1, z_expected, epsilon = 1e-6);
        assert_abs_diff_eq!(est.bounce_time, t_b, epsilon = 1e-9);
    }

    #[test]
    fn noisy_estimate_stays_near_analytic_strike() {
        // σ = 0.5 cm noise on a 45-sample window spanning the bounce; the
        // closed-form strike point of the planted flight is the oracle
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vy = 550.0;
        let z0 = 25.0;
        let vz0 = 30.0;
        let noise = rand_distr::Normal::new(0.0, 0.5).unwrap();
        let mut samples = sample_series(45, vy, vz0, z0);
        for (_, p) in samples.iter_mut() {
            for v in p.iter_mut() {
                *v += rand_distr::Distribution::sample(&noise, &mut rng);
            }
        }
        let raw: Vec<[f64; 3]> = samples.iter().map(|(_, p)| *p).collect();
        let bounce = detect_bounce_index(&raw, BALL_RADIUS_CM);
        assert!(bounce.is_some(), "bounce lies inside the window");
        let est = fit_servo_estimate(&samples, bounce, -140.0).unwrap();
        let t_strike = 277.0 / vy;
        let x_expected = 10.0 - 0.1 * vy * t_strike;
        let disc = (vz0 * vz0 + 2.0 * G * z0).sqrt();
        let t_b = (vz0 + disc) / G;
        let tau = t_strike - t_b;
        let z_expected = disc * tau - 0.5 * G * tau * tau;
        assert!(
            (est.strike_point.0 - x_expected).abs() < 3.0,
            "x: {} vs {}",
            est.strike_point.0,
            x_expected
        );
        assert!(
            (est.strike_point.1 - z_expected).abs() < 8.0,
            "z: {} vs {}",
            est.strike_point.1,
            z_expected
        );
    }

    #[test]
    fn post_refit_once_enough_samples() {
        let samples = sample_series(60, 500.0, 30.0, 25.0);
        let bounce = detect_bounce_index(
            &samples.iter().map(|(_, p)| *p).collect::<Vec<_>>(),
            BALL_RADIUS_CM,
        )
        .unwrap();
        let est = fit_servo_estimate(&samples, Some(bounce), -140.0).unwrap();
        assert!(est.post_refit);
        // refit z curve reproduces the post-bounce arc
        let (t_probe, p_probe) = samples[bounce + 10];
        assert_abs_diff_eq!(est.post_bounce[2].eval(t_probe), p_probe[2], epsilon = 1e-6);
    }

    #[test]
    fn too_few_samples_rejected() {
        let samples = sample_series(2, 500.0, 30.0, 25.0);
        assert!(matches!(
            fit_servo_estimate(&samples, None, -140.0),
            Err(TrajectoryError::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn no_strike_crossing_reported() {
        // ball flying away from the plane: y increases
        let samples: Vec<(f64, [f64; 3])> = (0..10)
            .map(|i| {
                let t = i as f64 * 0.01;
                (t, [0.0, 10.0 + 300.0 * t, 50.0 + 10.0 * t])
            })
            .collect();
        assert!(matches!(
            fit_servo_estimate(&samples, None, -140.0),
            Err(TrajectoryError::NoStrikeCrossing(_))
        ));
    }

    #[test]
    fn descending_ball_is_not_a_bounce() {
        // z still decreasing at the last sample: no confirmed bounce
        let series: Vec<[f64; 3]> = (0..5)
            .map(|i| [0.0, -i as f64, 10.0 - 2.0 * i as f64])
            .collect();
        assert_eq!(detect_bounce_index(&series, BALL_RADIUS_CM), None);
    }

    #[test]
    fn bounce_detected_at_minimum() {
        let series: Vec<[f64; 3]> = vec![
            [0.0, 0.0, 8.0],
            [0.0, -1.0, 4.0],
            [0.0, -2.0, 0.5],
            [0.0, -3.0, 3.0],
            [0.0, -4.0, 6.0],
        ];
        assert_eq!(detect_bounce_index(&series, BALL_RADIUS_CM), Some(2));
    }
}
