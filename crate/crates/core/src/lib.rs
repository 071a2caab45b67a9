//! Age-of-information optimal update scheduling under distortion constraints.
//!
//! A receiver requests `N` updates over a horizon `T`. Each update is
//! processed for `c_i` time units before delivery; longer processing lowers
//! its distortion but ages it. The crate computes request intervals and
//! processing times minimizing the time-average age, under three kinds of
//! per-update processing constraint:
//!
//! - constant: `c_i >= c` (from a fixed distortion budget, see [`distortion`]),
//! - inverse-age: `c_i >= alpha * y_i`,
//! - proportional-age: `c_i >= c - alpha * y_i`.
//!
//! [`closed_form`] holds the exact optimal schedules, [`oracle`] an
//! independent numerical minimizer used to check them, and [`trajectory`]
//! the sawtooth age curve of a schedule. [`cli`] backs the `aoi-sched` binary.
//!
//! ```
//! use aoi_sched::closed_form::solve_constant;
//!
//! let sol = solve_constant(10.0, 3, 1.0).unwrap();
//! assert_eq!(sol.schedule.intervals(), &[2.25, 2.25, 2.25, 3.25]);
//! assert_eq!(sol.total_age, 19.625);
//! ```

// Negated float comparisons below are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod distortion;
pub mod error;
pub mod model;
pub mod oracle;
pub mod trajectory;

pub use closed_form::{solve, Branch, RegimeReport, Solution};
pub use distortion::{sensor_fusion_spec, DistortionKind, DistortionSpec};
pub use error::{Error, Result};
pub use model::{
    check_feasibility, ConstraintMode, FeasibilityReport, ModeKind, ProblemInstance, Schedule,
};
pub use oracle::{compare, oracle_solve, OracleConfig, OracleOutcome};
pub use trajectory::AgeTrajectory;
