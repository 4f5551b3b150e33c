//! Discrete-time exponential control barrier functions (DT-ECBFs) for systems
//! that are non-convex in the control input, with approximate safety overrides
//! and the two shielded evaluation environments (fixed-wing waypoint following,
//! two-lane car with lane merging and adaptive cruise control).
//!
//! The crate is organised bottom-up:
//!
//! - [`params`] / [`rng`]: parameter sets, config loading, seeded streams.
//! - [`dynamics`] / [`control`]: the exact discrete-time steppers and actuator boxes.
//! - [`barrier`]: the constraint `c_h`, min/max composition, rollout barriers.
//! - [`dblint`], [`fixed_wing`], [`car`]: the system-specific barriers.
//! - [`filter`]: single, line and candidate-line overrides plus a grid oracle.
//! - [`env`]: seeded episodic simulators and the shield wrapper.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod car;
pub mod control;
pub mod dblint;
pub mod dynamics;
pub mod env;
mod error;
pub mod filter;
pub mod fixed_wing;
pub mod params;
pub mod rng;

pub use error::{Error, Result};

/// A state counts as violating a safety limit only when it is more than this
/// far beyond it.
pub const VIOLATION_TOL: f64 = 1e-6;

/// Slack allowed on barrier constraints that hold exactly in real arithmetic.
pub const CONSTRAINT_TOL: f64 = 1e-9;
