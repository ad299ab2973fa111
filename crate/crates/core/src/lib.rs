//! Joint placement of a facility and a fixed-length highway under the L1
//! time metric.
//!
//! [`solver::solve`] enumerates every grid vertex and every pair of
//! perpendicular grid lines as anchors and runs an `O(n)` angular sweep on
//! each, for `O(n^3)` overall. [`oracle`] is an independent brute-force
//! reference used to certify results on small instances.

pub mod error;
pub mod events;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod solver;
pub mod sweep;
pub mod table;

pub use error::{Error, Result};
pub use geometry::{DemandPoint, Instance, Point, Route, Solution};
pub use solver::{solve, solve_vertex_only};
