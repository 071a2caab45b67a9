use std::collections::BTreeMap;

use super::chain::AffineChain;
use super::{tight_schedule, Branch, RegimeReport, Solution};
use crate::error::{Error, Result};
use crate::model::{validate_horizon, ModeKind, Schedule};

/// Optimal schedule under `c_i >= alpha * y_i`.
///
/// Processing always meets the bound with equality. For `alpha <= 1` the first
/// `N` intervals are equal; for `alpha > 1` they grow geometrically,
/// `y_i = alpha * y_{i-1}`, and only the first interval is free.
///
/// Always feasible: the constraint set is invariant under scaling.
pub fn solve_inverse_age(horizon: f64, updates: usize, alpha: f64) -> Result<Solution> {
    validate_horizon(horizon, updates)?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
    }
    let (branch, condition) = if alpha <= 1.0 {
        (Branch::InverseEqualized, "alpha <= 1")
    } else {
        (Branch::InverseGeometric, "alpha > 1")
    };
    let mut boundary_distances = BTreeMap::new();
    boundary_distances.insert("alpha - 1".to_string(), alpha - 1.0);

    Ok(Solution::new(
        branch_formula(branch, horizon, updates, alpha),
        RegimeReport {
            mode: ModeKind::InverseAge,
            branch,
            condition: condition.to_string(),
            boundary_distances,
        },
    ))
}

/// First interval of the geometric schedule, minimizing the total age along
/// `y_i = alpha^(i-1) * eta`, `y_{N+1} = T - sum y_i`.
pub fn geometric_first_interval(horizon: f64, updates: usize, alpha: f64) -> f64 {
    let chain = AffineChain::recurrence(updates, horizon, 0.0, alpha);
    let mut quad = vec![0.5 + alpha; updates];
    quad.push(0.5);
    chain.argmin(&quad, &vec![0.0; updates + 1])
}

pub(super) fn branch_formula(branch: Branch, horizon: f64, updates: usize, alpha: f64) -> Schedule {
    let n = updates as f64;
    let mut y = Vec::with_capacity(updates + 1);
    match branch {
        Branch::InverseGeometric => {
            y.push(geometric_first_interval(horizon, updates, alpha));
            for i in 1..updates {
                y.push(alpha * y[i - 1]);
            }
            let used: f64 = y.iter().sum();
            y.push(horizon - used);
        }
        _ => {
            let denom = n + 2.0 * alpha + 1.0;
            y.extend(std::iter::repeat_n(horizon / denom, updates));
            y.push((2.0 * alpha + 1.0) * horizon / denom);
        }
    }
    tight_schedule(y, |v| alpha * v)
}
