use std::collections::BTreeMap;

use super::{tight_schedule, Branch, RegimeReport, Solution, REL_SLACK};
use crate::error::{Error, Result};
use crate::model::{validate_horizon, ModeKind, Schedule};

/// Optimal schedule when every update must be processed for at least `c_min`.
///
/// Processing is pinned at `c_i = c_min`. With `N c <= T <= (N+2) c` the
/// receiver requests back-to-back after a first wait of `(T - N c) / 2`;
/// above `(N+2) c` all but the last interval are equal.
pub fn solve_constant(horizon: f64, updates: usize, c_min: f64) -> Result<Solution> {
    validate_horizon(horizon, updates)?;
    if !(c_min >= 0.0) || !c_min.is_finite() {
        return Err(Error::Domain(format!("c_min must be >= 0, got {c_min}")));
    }
    let n = updates as f64;
    let floor = n * c_min;
    let knee = (n + 2.0) * c_min;
    if horizon < floor * (1.0 - REL_SLACK) {
        return Err(Error::Infeasible(format!(
            "T < N·c ({horizon} < {floor}): back-to-back processing overruns the horizon"
        )));
    }

    // At T = (N+2) c both formulas coincide.
    let (branch, condition) = if horizon > knee {
        (Branch::ConstantSpaced, "T > (N+2)·c")
    } else {
        (Branch::ConstantBackToBack, "N·c <= T <= (N+2)·c")
    };
    let mut boundary_distances = BTreeMap::new();
    boundary_distances.insert("T - N·c".to_string(), horizon - floor);
    boundary_distances.insert("T - (N+2)·c".to_string(), horizon - knee);

    let schedule = branch_formula(branch, horizon, updates, c_min);
    Ok(Solution::new(
        schedule,
        RegimeReport {
            mode: ModeKind::Constant,
            branch,
            condition: condition.to_string(),
            boundary_distances,
        },
    ))
}

pub(super) fn branch_formula(branch: Branch, horizon: f64, updates: usize, c_min: f64) -> Schedule {
    let n = updates as f64;
    let mut y = Vec::with_capacity(updates + 1);
    match branch {
        Branch::ConstantBackToBack => {
            y.push(((horizon - n * c_min) / 2.0).max(0.0));
            y.extend(std::iter::repeat_n(c_min, updates - 1));
            y.push((horizon - (n - 2.0) * c_min) / 2.0);
        }
        _ => {
            y.extend(std::iter::repeat_n((horizon - c_min) / (n + 1.0), updates));
            y.push((horizon + n * c_min) / (n + 1.0));
        }
    }
    tight_schedule(y, |_| c_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_is_equal_split() {
        let sol = solve_constant(10.0, 3, 0.0).unwrap();
        assert_eq!(sol.schedule.intervals(), &[2.5; 4]);
        assert_eq!(sol.regime.branch, Branch::ConstantSpaced);
    }

    #[test]
    fn single_update_back_to_back() {
        // N = 1: y_1 = (T - c)/2, y_2 = (T + c)/2
        let sol = solve_constant(3.0, 1, 2.0).unwrap();
        assert_eq!(sol.regime.branch, Branch::ConstantBackToBack);
        assert_eq!(sol.schedule.intervals(), &[0.5, 2.5]);
    }

    #[test]
    fn infeasible_names_bound() {
        let err = solve_constant(10.0, 3, 4.0).unwrap_err();
        match err {
            Error::Infeasible(msg) => assert!(msg.contains("T < N·c"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            solve_constant(10.0, 0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solve_constant(-1.0, 3, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solve_constant(10.0, 3, f64::NAN),
            Err(Error::Domain(_))
        ));
    }
}
