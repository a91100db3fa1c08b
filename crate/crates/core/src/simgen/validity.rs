//! Segment exclusion rules applied before a candidate enters the dataset.

use super::generator::CandidateSegment;
use super::GeneratorConfig;
use crate::spatial::TableGeometry;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RejectReason {
    #[error("rule 1: {fraction:.2} of pre-hit frames have no pose (threshold {threshold:.2})")]
    MissingPose { fraction: f64, threshold: f64 },
    #[error("rule 2: {fraction:.2} of pre-hit frames have no paddle (threshold {threshold:.2})")]
    MissingPaddle { fraction: f64, threshold: f64 },
    #[error("rule 3: ball bounces on the striker's side at y = {bounce_y:.1}")]
    WrongSideBounce { bounce_y: f64 },
    #[error("ball misses the table: bounce at ({bounce_x:.1}, {bounce_y:.1})")]
    OffTableBounce { bounce_x: f64, bounce_y: f64 },
    #[error("post-hit path never crosses the strike plane")]
    NoStrikeCrossing,
    #[error(
        "second bounce at t = {second:.3} s precedes the strike-plane crossing at t = {cross:.3} s"
    )]
    DoubleBounce { second: f64, cross: f64 },
}

impl RejectReason {
    /// Stable key for rejection tallies.
    pub fn key(&self) -> &'static str {
        match self {
            RejectReason::MissingPose { .. } => "missing_pose",
            RejectReason::MissingPaddle { .. } => "missing_paddle",
            RejectReason::WrongSideBounce { .. } => "wrong_side_bounce",
            RejectReason::OffTableBounce { .. } => "off_table_bounce",
            RejectReason::NoStrikeCrossing => "no_strike_crossing",
            RejectReason::DoubleBounce { .. } => "double_bounce",
        }
    }
}

pub fn validity_filter(
    candidate: &CandidateSegment,
    config: &GeneratorConfig,
    table: &TableGeometry,
) -> Result<(), RejectReason> {
    let n = candidate.pre_hit.len() as f64;
    let pose_missing = candidate
        .pre_hit
        .iter()
        .filter(|f| f.pose.is_none())
        .count() as f64
        / n;
    if pose_missing > config.dropout_threshold {
        return Err(RejectReason::MissingPose {
            fraction: pose_missing,
            threshold: config.dropout_threshold,
        });
    }
    let paddle_missing = candidate
        .pre_hit
        .iter()
        .filter(|f| f.paddle.is_none())
        .count() as f64
        / n;
    if paddle_missing > config.dropout_threshold {
        return Err(RejectReason::MissingPaddle {
            fraction: paddle_missing,
            threshold: config.dropout_threshold,
        });
    }

    let bounce_y = candidate.intent.bounce_y;
    if bounce_y >= 0.0 {
        return Err(RejectReason::WrongSideBounce { bounce_y });
    }
    let bounce_x = candidate.flight.bounce_x;
    if bounce_x.abs() > table.width / 2.0 || bounce_y <= -table.length / 2.0 {
        return Err(RejectReason::OffTableBounce { bounce_x, bounce_y });
    }

    let crosses = candidate
        .post_hit_ball
        .windows(2)
        .any(|w| w[0][1] > table.strike_plane_y && w[1][1] <= table.strike_plane_y);
    if !crosses {
        return Err(RejectReason::NoStrikeCrossing);
    }

    // keep a small tail margin so stored samples never dip under the table
    if candidate.flight.second_bounce_time <= candidate.flight.t_cross + 0.03 {
        return Err(RejectReason::DoubleBounce {
            second: candidate.flight.second_bounce_time,
            cross: candidate.flight.t_cross,
        });
    }
    Ok(())
}
