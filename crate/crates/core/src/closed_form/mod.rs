//! Optimal schedules in closed form, one solver per constraint mode.
//!
//! Every solver classifies the instance into a regime (a [`Branch`]), evaluates
//! that regime's formula and returns the schedule together with a
//! [`RegimeReport`]. The formula of any branch can also be evaluated outside
//! its own regime with [`branch_schedule`], which is how continuity across
//! regime boundaries is checked.

mod chain;
mod constant;
mod inverse_age;
mod proportional;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::model::{ConstraintMode, ModeKind, ProblemInstance, Schedule};

pub use constant::solve_constant;
pub use inverse_age::{geometric_first_interval, solve_inverse_age};
pub use proportional::{proportional_boundaries, solve_proportional_age, ProportionalBoundaries};

/// Relative slack used when comparing `T` against regime boundaries.
pub(crate) const REL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Constant mode, `T > (N+2) c`: equal waits after every receipt.
    ConstantSpaced,
    /// Constant mode, `N c <= T <= (N+2) c`: back-to-back after the first request.
    ConstantBackToBack,
    /// Inverse-age mode, `alpha <= 1`.
    InverseEqualized,
    /// Inverse-age mode, `alpha > 1`: `y_i = alpha y_{i-1}`.
    InverseGeometric,
    /// Proportional mode, `T <= B1`: alternating tight chain.
    ProportionalChain,
    /// Proportional mode, `B1 < T < B2`.
    ProportionalEqualized,
    /// Proportional mode, `B2 <= T < B3`: `y_i = c / alpha`.
    ProportionalCapped,
    /// Proportional mode, `T >= B3`: constraint inactive.
    ProportionalFree,
}

impl Branch {
    /// Short label used in reports.
    pub fn code(self) -> &'static str {
        match self {
            Branch::ConstantSpaced => "A",
            Branch::ConstantBackToBack => "B",
            Branch::InverseEqualized => "alpha<=1",
            Branch::InverseGeometric => "alpha>1",
            Branch::ProportionalChain => "S",
            Branch::ProportionalEqualized => "M",
            Branch::ProportionalCapped => "C",
            Branch::ProportionalFree => "D",
        }
    }

    pub fn mode(self) -> ModeKind {
        match self {
            Branch::ConstantSpaced | Branch::ConstantBackToBack => ModeKind::Constant,
            Branch::InverseEqualized | Branch::InverseGeometric => ModeKind::InverseAge,
            _ => ModeKind::ProportionalAge,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.code())
    }
}

/// Which regime produced a solution, and how far the instance sits from each
/// regime boundary (positive means `T` is above the boundary).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub mode: ModeKind,
    pub branch: Branch,
    pub condition: String,
    pub boundary_distances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub schedule: Schedule,
    pub regime: RegimeReport,
    pub total_age: f64,
}

impl Solution {
    fn new(schedule: Schedule, regime: RegimeReport) -> Self {
        let total_age = schedule.total_age();
        Self {
            schedule,
            regime,
            total_age,
        }
    }
}

/// Solves `instance` with the closed form of its constraint mode.
pub fn solve(instance: &ProblemInstance) -> Result<Solution> {
    let (t, n) = (instance.horizon, instance.updates);
    match instance.mode {
        ConstraintMode::Constant { c_min } => solve_constant(t, n, c_min),
        ConstraintMode::InverseAge { alpha } => solve_inverse_age(t, n, alpha),
        ConstraintMode::ProportionalAge { c, alpha } => solve_proportional_age(t, n, c, alpha),
    }
}

/// Evaluates the formula of `branch` on `instance`, whether or not the
/// instance lies inside that branch's regime.
pub fn branch_schedule(instance: &ProblemInstance, branch: Branch) -> Result<Schedule> {
    instance.validate()?;
    let (t, n) = (instance.horizon, instance.updates);
    match (instance.mode, branch.mode()) {
        (ConstraintMode::Constant { c_min }, ModeKind::Constant) => {
            Ok(constant::branch_formula(branch, t, n, c_min))
        }
        (ConstraintMode::InverseAge { alpha }, ModeKind::InverseAge) => {
            Ok(inverse_age::branch_formula(branch, t, n, alpha))
        }
        (ConstraintMode::ProportionalAge { c, alpha }, ModeKind::ProportionalAge) => {
            proportional::branch_formula(branch, t, n, c, alpha)
        }
        (mode, _) => Err(crate::Error::Domain(format!(
            "branch {branch} does not belong to the {} mode",
            mode.kind()
        ))),
    }
}

/// Builds a schedule from intervals and the mode's tight processing rule.
fn tight_schedule(y: Vec<f64>, rule: impl Fn(f64) -> f64) -> Schedule {
    let n = y.len() - 1;
    let c = y[..n].iter().map(|&v| rule(v)).collect();
    Schedule::new(y, c).expect("closed forms emit N+1 intervals")
}
