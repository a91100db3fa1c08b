//! Deterministic simulation and control toolkit for anticipatory ping-pong
//! interception: synthetic rally segments, strike-point prediction with
//! pluggable models, uncertainty proxies that gate controller speed, and a
//! 9-DOF kinematic robot driven by a pseudoinverse Cartesian controller
//! under position/velocity/acceleration limits.

pub mod geometry;
pub mod metrics;
pub mod predictor;
pub mod robot;
pub mod segment;
pub mod sim;
pub mod simgen;
pub mod spatial;
pub mod state;
pub mod trajectory;
pub mod uncertainty;

pub use metrics::{MetricsTable, RegionStats, TrialResult};
pub use segment::{Segment, StrikePoint};
pub use spatial::{classify_region, Region, TableGeometry};
pub use state::GameState;
pub use trajectory::PiecewiseLinearXY;
