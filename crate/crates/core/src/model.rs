//! Problem instances, schedules and the total-age objective.
//!
//! Indices in messages are 1-based: `y_1..y_{N+1}` and `c_1..c_N`. Storage is
//! 0-based; the conventions `c_0 = c_{N+1} = 0` are applied in code and never
//! stored.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for [`check_feasibility`].
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Per-update lower bound on processing time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConstraintMode {
    /// `c_i >= c_min`.
    Constant { c_min: f64 },
    /// `c_i >= alpha * y_i`.
    InverseAge { alpha: f64 },
    /// `c_i >= c - alpha * y_i` and `c_i >= 0`, with `0 < alpha < 1/2`.
    ProportionalAge { c: f64, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Constant,
    InverseAge,
    ProportionalAge,
}

impl ModeKind {
    pub const ALL: [ModeKind; 3] = [
        ModeKind::Constant,
        ModeKind::InverseAge,
        ModeKind::ProportionalAge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModeKind::Constant => "constant",
            ModeKind::InverseAge => "inverse",
            ModeKind::ProportionalAge => "proportional",
        }
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl ConstraintMode {
    pub fn kind(&self) -> ModeKind {
        match self {
            ConstraintMode::Constant { .. } => ModeKind::Constant,
            ConstraintMode::InverseAge { .. } => ModeKind::InverseAge,
            ConstraintMode::ProportionalAge { .. } => ModeKind::ProportionalAge,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ConstraintMode::Constant { c_min } => {
                if !(c_min >= 0.0) || !c_min.is_finite() {
                    return Err(Error::Domain(format!("c_min must be >= 0, got {c_min}")));
                }
            }
            ConstraintMode::InverseAge { alpha } => {
                if !(alpha > 0.0) || !alpha.is_finite() {
                    return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
                }
            }
            ConstraintMode::ProportionalAge { c, alpha } => {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::Domain(format!("c must be > 0, got {c}")));
                }
                if !(alpha > 0.0 && alpha < 0.5) {
                    return Err(Error::Domain(format!(
                        "alpha must lie in (0, 1/2), got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest processing time the mode allows for an update requested at age `y`.
    pub fn min_processing(&self, y: f64) -> f64 {
        match *self {
            ConstraintMode::Constant { c_min } => c_min,
            ConstraintMode::InverseAge { alpha } => alpha * y,
            ConstraintMode::ProportionalAge { c, alpha } => (c - alpha * y).max(0.0),
        }
    }
}

/// Horizon `T`, update count `N` and the processing-time constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub horizon: f64,
    pub updates: usize,
    pub mode: ConstraintMode,
}

impl ProblemInstance {
    pub fn new(horizon: f64, updates: usize, mode: ConstraintMode) -> Result<Self> {
        let instance = Self {
            horizon,
            updates,
            mode,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn constant(horizon: f64, updates: usize, c_min: f64) -> Result<Self> {
        Self::new(horizon, updates, ConstraintMode::Constant { c_min })
    }

    pub fn inverse_age(horizon: f64, updates: usize, alpha: f64) -> Result<Self> {
        Self::new(horizon, updates, ConstraintMode::InverseAge { alpha })
    }

    pub fn proportional_age(horizon: f64, updates: usize, c: f64, alpha: f64) -> Result<Self> {
        Self::new(
            horizon,
            updates,
            ConstraintMode::ProportionalAge { c, alpha },
        )
    }

    pub fn validate(&self) -> Result<()> {
        validate_horizon(self.horizon, self.updates)?;
        self.mode.validate()
    }
}

pub(crate) fn validate_horizon(horizon: f64, updates: usize) -> Result<()> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Domain(format!(
            "horizon T must be > 0, got {horizon}"
        )));
    }
    if updates == 0 {
        return Err(Error::Domain("update count N must be >= 1".into()));
    }
    Ok(())
}

/// Inter-request intervals `y` (length N+1) and processing times `c` (length N).
///
/// `y_i` is also the receiver's age at the moment update `i` is requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    y: Vec<f64>,
    c: Vec<f64>,
}

impl Schedule {
    pub fn new(y: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::Shape("a schedule needs at least one update".into()));
        }
        if y.len() != c.len() + 1 {
            return Err(Error::Shape(format!(
                "expected {} intervals for {} updates, got {}",
                c.len() + 1,
                c.len(),
                y.len()
            )));
        }
        Ok(Self { y, c })
    }

    pub fn intervals(&self) -> &[f64] {
        &self.y
    }

    pub fn processing(&self) -> &[f64] {
        &self.c
    }

    pub fn updates(&self) -> usize {
        self.c.len()
    }

    /// Sum of the intervals, i.e. the horizon the schedule covers.
    pub fn span(&self) -> f64 {
        self.y.iter().sum()
    }

    /// `A_T = 1/2 sum y_i^2 + sum c_i y_i`.
    pub fn total_age(&self) -> f64 {
        let squares: f64 = self.y.iter().map(|y| y * y).sum();
        let cross: f64 = self.c.iter().zip(&self.y).map(|(c, y)| c * y).sum();
        0.5 * squares + cross
    }

    pub fn average_age(&self, horizon: f64) -> f64 {
        self.total_age() / horizon
    }

    /// Waiting times `s_i = y_i - c_{i-1}` between a receipt and the next request.
    pub fn request_gaps(&self) -> Vec<f64> {
        self.y
            .iter()
            .enumerate()
            .map(|(i, y)| if i == 0 { *y } else { y - self.c[i - 1] })
            .collect()
    }

    /// Returns a copy with every interval and processing time multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            y: self.y.iter().map(|v| v * k).collect(),
            c: self.c.iter().map(|v| v * k).collect(),
        }
    }
}

pub fn total_age(schedule: &Schedule) -> f64 {
    schedule.total_age()
}

pub fn average_age(schedule: &Schedule, horizon: f64) -> f64 {
    schedule.average_age(horizon)
}

pub fn request_gaps(schedule: &Schedule) -> Vec<f64> {
    schedule.request_gaps()
}

/// One violated constraint; `residual` is the (positive) amount of the breach.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: String,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (violated by {})", self.constraint, self.residual)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn worst_residual(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| v.residual)
            .fold(0.0, f64::max)
    }

    fn require(&mut self, constraint: impl FnOnce() -> String, slack: f64, tol: f64) {
        if slack < -tol {
            self.violations.push(Violation {
                constraint: constraint(),
                residual: -slack,
            });
        }
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("feasible");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every constraint of `instance` that `schedule` breaks by more than `tol`.
///
/// The horizon equality is checked relative to `max(1, T)`; all other residuals
/// are absolute.
pub fn check_feasibility(
    instance: &ProblemInstance,
    schedule: &Schedule,
    tol: f64,
) -> Result<FeasibilityReport> {
    if schedule.updates() != instance.updates {
        return Err(Error::Shape(format!(
            "instance has N = {} but schedule has {} updates",
            instance.updates,
            schedule.updates()
        )));
    }
    let (y, c) = (schedule.intervals(), schedule.processing());
    let mut report = FeasibilityReport::default();

    let drift = (schedule.span() - instance.horizon).abs();
    let allowed = tol * instance.horizon.max(1.0);
    if drift > allowed {
        report.violations.push(Violation {
            constraint: format!("sum y = {}", instance.horizon),
            residual: drift,
        });
    }

    for (i, s) in schedule.request_gaps().iter().enumerate() {
        report.require(|| format!("s_{} >= 0", i + 1), *s, tol);
    }
    for (i, ci) in c.iter().enumerate() {
        report.require(|| format!("c_{} >= 0", i + 1), *ci, tol);
    }

    match instance.mode {
        ConstraintMode::Constant { c_min } => {
            for (i, ci) in c.iter().enumerate() {
                report.require(|| format!("c_{} >= {}", i + 1, c_min), ci - c_min, tol);
            }
        }
        ConstraintMode::InverseAge { alpha } => {
            for (i, ci) in c.iter().enumerate() {
                report.require(
                    || format!("c_{0} >= {1} * y_{0}", i + 1, alpha),
                    ci - alpha * y[i],
                    tol,
                );
            }
        }
        ConstraintMode::ProportionalAge { c: base, alpha } => {
            for (i, ci) in c.iter().enumerate() {
                report.require(
                    || format!("c_{0} >= {1} - {2} * y_{0}", i + 1, base, alpha),
                    ci - (base - alpha * y[i]),
                    tol,
                );
            }
        }
    }
    Ok(report)
}
