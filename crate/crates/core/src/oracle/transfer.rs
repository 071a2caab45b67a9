//! Pairwise mass transfer with ternary line search.
//!
//! A transfer moves `delta` from `y_i` to `y_j`, so `sum y` is preserved by
//! construction. The step is clipped to keep every row satisfied, and the
//! 1-D restriction `term_i(y_i - delta) + term_j(y_j + delta)` is convex in
//! every mode, so ternary search finds its minimum.

use super::problem::ReducedProblem;

const TERNARY_ROUNDS: usize = 200;

pub(crate) struct TransferRun {
    pub sweeps: usize,
    pub converged: bool,
    /// Objective after each sweep.
    pub trace: Vec<f64>,
    /// Largest `|sum y - T|` seen after any sweep.
    pub max_sum_drift: f64,
}

/// Feasible range of `delta` for the pair `(i, j)`.
fn step_range(problem: &ReducedProblem, y: &[f64], i: usize, j: usize) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for row in &problem.rows {
        let rate = row.coefficient(j) - row.coefficient(i);
        if rate == 0.0 {
            continue;
        }
        let slack = row.slack(y).max(0.0);
        if rate > 0.0 {
            lo = lo.max(-slack / rate);
        } else {
            hi = hi.min(slack / -rate);
        }
    }
    (lo, hi)
}

fn ternary_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..TERNARY_ROUNDS {
        if hi - lo <= 4.0 * f64::EPSILON * (lo.abs().max(hi.abs()).max(1e-300)) {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Runs sweeps over all pairs until a sweep improves the objective by no more
/// than `tol`, or `max_sweeps` is reached.
pub(crate) fn polish(
    problem: &ReducedProblem,
    y: &mut [f64],
    tol: f64,
    max_sweeps: usize,
) -> TransferRun {
    let dim = problem.dim();
    let mut current = problem.objective(y);
    let mut trace = Vec::new();
    let mut max_sum_drift: f64 = 0.0;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps {
        sweeps += 1;
        let before = current;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let (lo, hi) = step_range(problem, y, i, j);
                if !(hi > lo) {
                    continue;
                }
                let (yi, yj) = (y[i], y[j]);
                let pair = |d: f64| problem.term(i, yi - d) + problem.term(j, yj + d);
                let delta = ternary_min(pair, lo, hi);
                if pair(delta) < pair(0.0) {
                    y[i] = yi - delta;
                    y[j] = yj + delta;
                }
            }
        }
        current = problem.objective(y);
        trace.push(current);
        let drift = (y.iter().sum::<f64>() - problem.horizon).abs();
        max_sum_drift = max_sum_drift.max(drift);
        if before - current <= tol {
            converged = true;
            break;
        }
    }
    TransferRun {
        sweeps,
        converged,
        trace,
        max_sum_drift,
    }
}
