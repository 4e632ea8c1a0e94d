//! Tame sequential collision-free motion planners for point robots in
//! Euclidean space.
//!
//! Two planners are provided. [`GeneralPlanner`] works in every dimension
//! `d >= 2` and splits the space of `n`-waypoint queries into `n(k-1)+1`
//! domains of continuity; [`EvenPlanner`] needs even `d` and uses `n(k-1)`.
//! Both return closed-form piecewise [`Trajectory`] values that pass through
//! the query's configurations at times `j/(n-1)`.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod pathkit;
pub mod planner;
pub mod planner_even;
pub mod planner_general;
pub mod query;
pub mod random;
pub mod verify;

pub use error::{PlanError, Result};
pub use geometry::{Configuration, OrientedLine, Point, Tolerances, UnitVector};
pub use pathkit::{Homotopy, Motion, Piece, Trajectory};
pub use planner::{Algorithm, CellLabel, EvenPlanner, GeneralPlanner, Planner};
pub use query::Query;
pub use verify::{expected_tc, VerificationReport};
