//! Obstacle rearrangement planning for grasping a target in dense planar clutter.
//!
//! Objects are disks on a table that the manipulator can only reach from one side.
//! The planner inflates obstacles into configuration space, builds a threshold-free
//! polar histogram around the object it is trying to clear, and either grasps that
//! object (a free approach direction exists) or recurses on the obstacle lying
//! closest to the least-occupied direction.
//!
//! Alongside the planner the crate ships two reference removal strategies, an exact
//! ray-accessibility oracle with a brute-force minimum-relocation search, a small
//! execution simulator with pose perturbation, and a benchmark campaign runner.

pub mod baselines;
pub mod bench;
pub mod cspace;
mod error;
pub mod geometry;
pub mod histogram;
pub mod oracle;
pub mod par;
pub mod planner;
pub mod render;
pub mod scene;
pub mod sim;

pub use baselines::GaussianParams;
pub use cspace::{CSpaceParams, InflatedObstacle};
pub use error::{Error, Result};
pub use geometry::{Point2, Rect};
pub use histogram::{HistogramConfig, HistogramParams, PolarHistogram};
pub use planner::{DecisionRecord, Method, Plan, PlanStep, PlannerConfig};
pub use scene::{GenSpec, ObjectDisk, ObjectId, Scene, TargetPolicy};
