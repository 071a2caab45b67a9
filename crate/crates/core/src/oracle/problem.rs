//! The reduced problem in the intervals `y` alone.
//!
//! With processing fixed by the mode's tight rule the objective is separable,
//! `f(y) = sum_i term_i(y_i)`, and every inequality couples at most two
//! neighbouring intervals: `y_i + weight * y_{i-1} >= rhs`.

use crate::model::{ConstraintMode, ProblemInstance, Schedule};

/// `y_index + prev_weight * y_{index-1} >= rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Row {
    pub index: usize,
    pub prev_weight: f64,
    pub rhs: f64,
}

impl Row {
    pub fn slack(&self, y: &[f64]) -> f64 {
        let prev = if self.prev_weight != 0.0 {
            self.prev_weight * y[self.index - 1]
        } else {
            0.0
        };
        y[self.index] + prev - self.rhs
    }

    /// Coefficient of `y_k` in the row.
    pub fn coefficient(&self, k: usize) -> f64 {
        if k == self.index {
            1.0
        } else if self.index > 0 && k == self.index - 1 {
            self.prev_weight
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ReducedProblem {
    pub horizon: f64,
    pub updates: usize,
    pub mode: ConstraintMode,
    pub rows: Vec<Row>,
}

impl ReducedProblem {
    pub fn new(instance: &ProblemInstance) -> Self {
        let n = instance.updates;
        let mut rows = vec![Row {
            index: 0,
            prev_weight: 0.0,
            rhs: 0.0,
        }];
        for i in 1..=n {
            match instance.mode {
                ConstraintMode::Constant { c_min } => rows.push(Row {
                    index: i,
                    prev_weight: 0.0,
                    rhs: c_min,
                }),
                ConstraintMode::InverseAge { alpha } => rows.push(Row {
                    index: i,
                    prev_weight: -alpha,
                    rhs: 0.0,
                }),
                ConstraintMode::ProportionalAge { c, alpha } => {
                    rows.push(Row {
                        index: i,
                        prev_weight: 0.0,
                        rhs: 0.0,
                    });
                    rows.push(Row {
                        index: i,
                        prev_weight: alpha,
                        rhs: c,
                    });
                }
            }
        }
        Self {
            horizon: instance.horizon,
            updates: n,
            mode: instance.mode,
            rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.updates + 1
    }

    /// Contribution of interval `i` to the total age, with processing at its minimum.
    pub fn term(&self, i: usize, v: f64) -> f64 {
        let own = 0.5 * v * v;
        if i == self.updates {
            return own;
        }
        own + self.mode.min_processing(v) * v
    }

    pub fn objective(&self, y: &[f64]) -> f64 {
        y.iter().enumerate().map(|(i, &v)| self.term(i, v)).sum()
    }

    pub fn min_slack(&self, y: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| r.slack(y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Intervals where every row is tight except for an added margin `eps`:
    /// `y_i = max over rows ending at i of the required bound, plus eps`.
    /// The last interval is left at its own lower bound plus `eps`.
    pub fn chain(&self, eps: f64) -> Vec<f64> {
        let mut y: Vec<f64> = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let bound = self
                .rows
                .iter()
                .filter(|r| r.index == i)
                .map(|r| {
                    let prev = if i > 0 { r.prev_weight * y[i - 1] } else { 0.0 };
                    r.rhs - prev
                })
                .fold(f64::NEG_INFINITY, f64::max);
            y.push(bound + eps);
        }
        y
    }

    /// Shortest horizon admitting a feasible schedule.
    pub fn minimum_horizon(&self) -> f64 {
        self.chain(0.0).iter().sum()
    }

    /// A strictly feasible point summing to the horizon, with every row slack
    /// at least a positive margin. `None` when the interior is empty.
    pub fn interior_anchor(&self) -> Option<Vec<f64>> {
        let floor = self.minimum_horizon();
        let target = 0.5 * (floor + self.horizon);
        if !(target > floor) {
            return None;
        }
        // The chain sum grows strictly with the margin.
        let total = |eps: f64| -> f64 { self.chain(eps).iter().sum() };
        let (mut lo, mut hi) = (0.0, self.horizon);
        while total(hi) < target {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if total(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        let mut y = self.chain(lo);
        let used: f64 = y.iter().sum();
        *y.last_mut().unwrap() += self.horizon - used;
        (lo > 0.0 && self.min_slack(&y) > 0.0).then_some(y)
    }

    pub fn schedule(&self, y: Vec<f64>) -> Schedule {
        let c = y[..self.updates]
            .iter()
            .map(|&v| self.mode.min_processing(v))
            .collect();
        Schedule::new(y, c).expect("reduced problem keeps N+1 intervals")
    }
}
