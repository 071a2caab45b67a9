use std::collections::BTreeMap;

use super::chain::{feasible_interval, AffineBound, AffineChain};
use super::{tight_schedule, Branch, RegimeReport, Solution, REL_SLACK};
use crate::error::{Error, Result};
use crate::model::{validate_horizon, ModeKind, Schedule};

/// Horizons separating the four regimes of the proportional-age mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionalBoundaries {
    /// `(N+2-alpha)/(1+alpha) * c`: below it the tight chain binds.
    pub chain: f64,
    /// `(N+1-alpha)/alpha * c`: above it `y_i` reaches `c/alpha`.
    pub capped: f64,
    /// `(N+1)/alpha * c`: above it the constraint is inactive.
    pub free: f64,
}

pub fn proportional_boundaries(updates: usize, c: f64, alpha: f64) -> ProportionalBoundaries {
    let n = updates as f64;
    ProportionalBoundaries {
        chain: (n + 2.0 - alpha) / (1.0 + alpha) * c,
        capped: (n + 1.0 - alpha) / alpha * c,
        free: (n + 1.0) / alpha * c,
    }
}

fn validate(horizon: f64, updates: usize, c: f64, alpha: f64) -> Result<()> {
    validate_horizon(horizon, updates)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("c must be > 0, got {c}")));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1/2), got {alpha}"
        )));
    }
    Ok(())
}

/// Optimal schedule under `c_i >= c - alpha * y_i`, `c_i >= 0`.
///
/// Processing is `c_i = (c - alpha y_i)^+`. The regime is picked by comparing
/// `T` with the three [`ProportionalBoundaries`].
pub fn solve_proportional_age(
    horizon: f64,
    updates: usize,
    c: f64,
    alpha: f64,
) -> Result<Solution> {
    validate(horizon, updates, c, alpha)?;
    let bounds = proportional_boundaries(updates, c, alpha);
    let (branch, condition) = if horizon >= bounds.free {
        (Branch::ProportionalFree, "T >= (N+1)·c/alpha")
    } else if horizon >= bounds.capped {
        (
            Branch::ProportionalCapped,
            "(N+1-alpha)·c/alpha <= T < (N+1)·c/alpha",
        )
    } else if horizon > bounds.chain {
        (
            Branch::ProportionalEqualized,
            "(N+2-alpha)·c/(1+alpha) < T < (N+1-alpha)·c/alpha",
        )
    } else {
        (Branch::ProportionalChain, "T <= (N+2-alpha)·c/(1+alpha)")
    };

    let mut boundary_distances = BTreeMap::new();
    boundary_distances.insert("T - B1".to_string(), horizon - bounds.chain);
    boundary_distances.insert("T - B2".to_string(), horizon - bounds.capped);
    boundary_distances.insert("T - B3".to_string(), horizon - bounds.free);

    let schedule = branch_formula(branch, horizon, updates, c, alpha)?;
    Ok(Solution::new(
        schedule,
        RegimeReport {
            mode: ModeKind::ProportionalAge,
            branch,
            condition: condition.to_string(),
            boundary_distances,
        },
    ))
}

pub(super) fn branch_formula(
    branch: Branch,
    horizon: f64,
    updates: usize,
    c: f64,
    alpha: f64,
) -> Result<Schedule> {
    let n = updates as f64;
    let rule = |v: f64| (c - alpha * v).max(0.0);
    let mut y = Vec::with_capacity(updates + 1);
    match branch {
        Branch::ProportionalFree => {
            y.extend(std::iter::repeat_n(horizon / (n + 1.0), updates + 1));
        }
        Branch::ProportionalCapped => {
            y.extend(std::iter::repeat_n(c / alpha, updates));
            y.push(horizon - n * c / alpha);
        }
        Branch::ProportionalEqualized => {
            let denom = n + 1.0 - 2.0 * alpha;
            y.extend(std::iter::repeat_n((horizon - c) / denom, updates));
            y.push(((1.0 - 2.0 * alpha) * horizon + n * c) / denom);
        }
        _ => return chain_schedule(horizon, updates, c, alpha),
    }
    Ok(tight_schedule(y, rule))
}

/// Tight chain `y_i = c - alpha y_{i-1}` for `i = 2..N` with the first interval
/// chosen to minimize total age over its feasible range.
fn chain_schedule(horizon: f64, updates: usize, c: f64, alpha: f64) -> Result<Schedule> {
    let chain = AffineChain::recurrence(updates, horizon, c, -alpha);
    let last = chain.term(updates);
    let before_last = chain.term(updates - 1);

    // y_1 >= 0, y_i >= 0, y_{N+1} >= 0 and y_{N+1} + alpha y_N >= c.
    let mut bounds: Vec<AffineBound> = (0..=updates).map(|i| chain.term(i)).collect();
    bounds.push(AffineBound {
        offset: last.offset + alpha * before_last.offset - c,
        slope: last.slope + alpha * before_last.slope,
    });
    let Some((lo, hi)) = feasible_interval(&bounds, REL_SLACK * horizon.max(1.0)) else {
        return Err(Error::Infeasible(format!(
            "T < {} (shortest horizon that fits the back-to-back chain from y_1 = 0)",
            minimum_horizon(updates, c, alpha)
        )));
    };

    let mut quad = vec![0.5 - alpha; updates];
    quad.push(0.5);
    let mut lin = vec![c; updates];
    lin.push(0.0);
    let eta = chain.argmin(&quad, &lin).clamp(lo, hi);

    let mut y = Vec::with_capacity(updates + 1);
    y.push(eta);
    for i in 1..updates {
        y.push(c - alpha * y[i - 1]);
    }
    let used: f64 = y.iter().sum();
    y.push(horizon - used);

    let cap = c / alpha;
    if let Some((i, v)) = y[..updates]
        .iter()
        .enumerate()
        .find(|(_, &v)| v > cap * (1.0 + 1e-9))
    {
        return Err(Error::Internal(format!(
            "chain regime produced y_{} = {v} above c/alpha = {cap}",
            i + 1
        )));
    }
    Ok(tight_schedule(y, |v| (c - alpha * v).max(0.0)))
}

/// Sum of the tight chain started at `y_1 = 0`, including the smallest
/// admissible last interval.
fn minimum_horizon(updates: usize, c: f64, alpha: f64) -> f64 {
    let mut prev = 0.0;
    let mut total = 0.0;
    for _ in 1..updates {
        prev = c - alpha * prev;
        total += prev;
    }
    total + (c - alpha * prev).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries_for_reference_parameters() {
        let b = proportional_boundaries(3, 1.0, 0.4);
        assert!((b.chain - 4.6 / 1.4).abs() < 1e-14);
        assert!((b.capped - 3.6 / 0.4).abs() < 1e-14);
        assert!((b.free - 10.0).abs() < 1e-14);
    }

    #[test]
    fn branch_selection() {
        let pick = |t: f64| {
            solve_proportional_age(t, 3, 1.0, 0.4)
                .unwrap()
                .regime
                .branch
        };
        assert_eq!(pick(3.0), Branch::ProportionalChain);
        assert_eq!(pick(6.0), Branch::ProportionalEqualized);
        assert_eq!(pick(9.5), Branch::ProportionalCapped);
        assert_eq!(pick(12.0), Branch::ProportionalFree);
    }

    #[test]
    fn tiny_horizon_is_infeasible() {
        // chain from y_1 = 0 for N = 3, c = 1, alpha = 0.4: 1 + 0.6 + 0.76 = 2.36
        assert!((minimum_horizon(3, 1.0, 0.4) - 2.36).abs() < 1e-12);
        assert!(matches!(
            solve_proportional_age(2.3, 3, 1.0, 0.4),
            Err(Error::Infeasible(_))
        ));
        let sol = solve_proportional_age(2.36, 3, 1.0, 0.4).unwrap();
        assert!(sol.schedule.intervals()[0].abs() < 1e-9);
    }

    #[test]
    fn alpha_domain() {
        assert!(matches!(
            solve_proportional_age(5.0, 3, 1.0, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solve_proportional_age(5.0, 3, 1.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solve_proportional_age(5.0, 3, 0.0, 0.2),
            Err(Error::Domain(_))
        ));
    }
}
