//! Log-barrier path following with equality-constrained Newton centering.
//!
//! Variables are the intervals `y` and, in the proportional mode, one
//! epigraph variable `t_i >= max(y_i^2/2, (1/2 - alpha) y_i^2 + c y_i)` per
//! update, which turns the kinked per-update cost into smooth convex cuts.

use nalgebra::{DMatrix, DVector};

use super::problem::ReducedProblem;
use crate::model::ConstraintMode;

const ARMIJO: f64 = 0.25;
const BACKTRACK: f64 = 0.5;
const TAU_GROWTH: f64 = 20.0;
const CENTERING_TOL: f64 = 1e-11;
/// A stage that has not centered after this many steps has hit the
/// conditioning floor of the KKT system; path following ends there.
const STAGE_STEPS: usize = 60;

/// `sum lin + 0.5 * quad_coef * x[quad_index]^2 + constant <= 0`.
#[derive(Debug, Clone)]
struct Cut {
    lin: Vec<(usize, f64)>,
    quad: Option<(usize, f64)>,
    constant: f64,
}

impl Cut {
    fn value(&self, x: &[f64]) -> f64 {
        let mut v = self.constant;
        for &(k, a) in &self.lin {
            v += a * x[k];
        }
        if let Some((k, q)) = self.quad {
            v += 0.5 * q * x[k] * x[k];
        }
        v
    }

    fn gradient(&self, x: &[f64], dim: usize) -> Vec<(usize, f64)> {
        let mut g: Vec<(usize, f64)> = self.lin.clone();
        if let Some((k, q)) = self.quad {
            match g.iter_mut().find(|(j, _)| *j == k) {
                Some(entry) => entry.1 += q * x[k],
                None => g.push((k, q * x[k])),
            }
        }
        debug_assert!(g.iter().all(|(k, _)| *k < dim));
        g
    }
}

/// Smooth convex program: minimize `sum 0.5 q_k x_k^2 + l_k x_k` subject to
/// cuts and `sum_{k < intervals} x_k = horizon`.
pub(crate) struct BarrierProgram {
    dim: usize,
    intervals: usize,
    horizon: f64,
    quad: Vec<f64>,
    lin: Vec<f64>,
    cuts: Vec<Cut>,
}

pub(crate) struct BarrierRun {
    pub y: Vec<f64>,
    pub newton_steps: usize,
    /// Objective in `y` at the end of each centering stage.
    pub stage_objectives: Vec<f64>,
}

impl BarrierProgram {
    pub fn new(problem: &ReducedProblem) -> Self {
        let n = problem.updates;
        let intervals = n + 1;
        let mut cuts: Vec<Cut> = problem
            .rows
            .iter()
            .map(|r| {
                let mut lin = vec![(r.index, -1.0)];
                if r.prev_weight != 0.0 {
                    lin.push((r.index - 1, -r.prev_weight));
                }
                Cut {
                    lin,
                    quad: None,
                    constant: r.rhs,
                }
            })
            .collect();

        let (dim, quad, lin) = match problem.mode {
            ConstraintMode::Constant { c_min } => {
                let mut lin = vec![c_min; n];
                lin.push(0.0);
                (intervals, vec![1.0; intervals], lin)
            }
            ConstraintMode::InverseAge { alpha } => {
                let mut quad = vec![1.0 + 2.0 * alpha; n];
                quad.push(1.0);
                (intervals, quad, vec![0.0; intervals])
            }
            ConstraintMode::ProportionalAge { c, alpha } => {
                let dim = intervals + n;
                let mut quad = vec![0.0; dim];
                let mut lin = vec![0.0; dim];
                quad[n] = 1.0;
                for i in 0..n {
                    let t = intervals + i;
                    lin[t] = 1.0;
                    cuts.push(Cut {
                        lin: vec![(t, -1.0)],
                        quad: Some((i, 1.0)),
                        constant: 0.0,
                    });
                    cuts.push(Cut {
                        lin: vec![(i, c), (t, -1.0)],
                        quad: Some((i, 1.0 - 2.0 * alpha)),
                        constant: 0.0,
                    });
                }
                (dim, quad, lin)
            }
        };
        Self {
            dim,
            intervals,
            horizon: problem.horizon,
            quad,
            lin,
            cuts,
        }
    }

    /// Lifts strictly feasible intervals to a strictly feasible full point.
    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        let mut x = y.to_vec();
        x.resize(self.dim, 0.0);
        for t in self.intervals..self.dim {
            // Largest epigraph cut value with t = 0, then move strictly above it.
            let need = self
                .cuts
                .iter()
                .filter(|cut| cut.lin.iter().any(|&(k, _)| k == t))
                .map(|cut| {
                    let mut probe = x.clone();
                    probe[t] = 0.0;
                    cut.value(&probe)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            x[t] = need + 1.0 + need.abs();
        }
        x
    }

    fn objective(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.quad.iter().zip(&self.lin))
            .map(|(v, (q, l))| 0.5 * q * v * v + l * v)
            .sum()
    }

    fn strictly_feasible(&self, x: &[f64]) -> bool {
        self.cuts.iter().all(|c| c.value(x) < 0.0)
    }

    fn barrier_value(&self, x: &[f64], tau: f64) -> f64 {
        let mut v = tau * self.objective(x);
        for cut in &self.cuts {
            let g = cut.value(x);
            if g >= 0.0 {
                return f64::INFINITY;
            }
            v -= (-g).ln();
        }
        v
    }

    /// Follows the central path from a strictly feasible `x` until the
    /// duality-gap bound `m / tau` drops below `gap_tol` or a stage fails to
    /// center. `None` if the Newton budget runs out first.
    pub fn solve(&self, mut x: Vec<f64>, gap_tol: f64, max_steps: usize) -> Option<BarrierRun> {
        debug_assert!(self.strictly_feasible(&x));
        let m = self.cuts.len() as f64;
        let scale = self.horizon * self.horizon;
        let mut tau = m / scale;
        let mut newton_steps = 0;
        let mut stage_objectives = Vec::new();
        loop {
            let mut centered = false;
            for _ in 0..STAGE_STEPS {
                if newton_steps >= max_steps {
                    return None;
                }
                newton_steps += 1;
                let Some((dx, decrement)) = self.newton_direction(&x, tau) else {
                    break;
                };
                if decrement / 2.0 <= CENTERING_TOL {
                    centered = true;
                    break;
                }
                if !self.line_search(&mut x, &dx, tau, decrement) {
                    break;
                }
            }
            stage_objectives.push(self.objective(&x));
            if !centered || m / tau < gap_tol {
                break;
            }
            tau *= TAU_GROWTH;
        }
        x.truncate(self.intervals);
        Some(BarrierRun {
            y: x,
            newton_steps,
            stage_objectives,
        })
    }

    fn newton_direction(&self, x: &[f64], tau: f64) -> Option<(Vec<f64>, f64)> {
        let n = self.dim;
        let mut kkt = DMatrix::<f64>::zeros(n + 1, n + 1);
        let mut rhs = DVector::<f64>::zeros(n + 1);
        for k in 0..n {
            kkt[(k, k)] = tau * self.quad[k];
            rhs[k] = -tau * (self.quad[k] * x[k] + self.lin[k]);
        }
        for cut in &self.cuts {
            let g = cut.value(x);
            let inv = 1.0 / -g;
            let grad = cut.gradient(x, n);
            for &(a, ga) in &grad {
                rhs[a] -= ga * inv;
                for &(b, gb) in &grad {
                    kkt[(a, b)] += ga * gb * inv * inv;
                }
            }
            if let Some((k, q)) = cut.quad {
                kkt[(k, k)] += q * inv;
            }
        }
        for k in 0..self.intervals {
            kkt[(k, n)] = 1.0;
            kkt[(n, k)] = 1.0;
        }
        let sol = kkt.lu().solve(&rhs)?;
        let dx: Vec<f64> = sol.iter().take(n).copied().collect();
        // -grad . dx with rhs[..n] = -grad
        let decrement: f64 = (0..n).map(|k| rhs[k] * dx[k]).sum();
        // At the center the decrement can round to a tiny negative value.
        decrement.is_finite().then_some((dx, decrement.max(0.0)))
    }

    fn line_search(&self, x: &mut Vec<f64>, dx: &[f64], tau: f64, decrement: f64) -> bool {
        let current = self.barrier_value(x, tau);
        let mut step = 1.0;
        for _ in 0..80 {
            let trial: Vec<f64> = x.iter().zip(dx).map(|(a, d)| a + step * d).collect();
            if trial == *x {
                // Step below rounding: the Armijo test can no longer tell progress apart.
                return false;
            }
            let value = self.barrier_value(&trial, tau);
            if value <= current - ARMIJO * step * decrement {
                *x = trial;
                return true;
            }
            step *= BACKTRACK;
        }
        false
    }
}
