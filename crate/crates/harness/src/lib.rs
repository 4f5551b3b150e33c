//! Episode runner, metric aggregation and verification suites for `dtcbf`.

pub mod policies;
pub mod runner;
pub mod verify;
