//! Independent numerical minimizer for checking the closed forms.
//!
//! The oracle knows only the objective and the linear constraints of the
//! reduced problem; it never consults a regime formula. Each restart draws a
//! random strictly feasible start, follows the log-barrier central path with
//! Newton centering, then polishes the result on the exact objective with
//! pairwise mass transfers. The best restart wins, ties going to the lower
//! restart index.

mod barrier;
mod problem;
mod transfer;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form;
use crate::error::{Error, Result};
use crate::model::{ConstraintMode, ModeKind, ProblemInstance, Schedule};

use barrier::BarrierProgram;
use problem::ReducedProblem;

/// Barrier stops once the duality-gap bound is below this fraction of `T^2`.
const BARRIER_GAP: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    /// Newton steps plus transfer sweeps allowed per restart.
    pub max_iterations: usize,
    /// A transfer sweep improving the objective by no more than this ends the search.
    pub line_search_tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_iterations: 20_000,
            line_search_tol: 1e-10,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let tol = self.line_search_tol;
        if self.restarts == 0 || self.max_iterations == 0 || !(tol > 0.0) {
            return Err(Error::Domain(
                "oracle needs restarts > 0, max_iterations > 0 and line_search_tol > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub schedule: Schedule,
    pub objective: f64,
    /// Index of the winning restart.
    pub restart: usize,
    /// Newton steps plus sweeps spent by the winning restart.
    pub iterations: usize,
    /// Best objective seen so far, recorded after every centering stage and
    /// every transfer sweep of the winning restart.
    pub best_trace: Vec<f64>,
    /// Largest `|sum y - T|` observed during transfers of the winning restart.
    pub max_sum_drift: f64,
}

struct RestartResult {
    y: Vec<f64>,
    objective: f64,
    iterations: usize,
    best_trace: Vec<f64>,
    max_sum_drift: f64,
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    // splitmix64 finalizer over (seed, restart)
    let mut z = seed
        ^ (restart as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random strictly feasible start: uniform weights scaled to `T`, pulled
/// toward the interior anchor just far enough to clear every row.
fn random_start(problem: &ReducedProblem, anchor: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let weights: Vec<f64> = (0..problem.dim()).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let raw: Vec<f64> = weights
        .iter()
        .map(|w| problem.horizon * w / total)
        .collect();

    let mut theta_min: f64 = 0.0;
    let mut needs_repair = false;
    for row in &problem.rows {
        let (sr, sa) = (row.slack(&raw), row.slack(anchor));
        if sr <= 0.0 {
            needs_repair = true;
            theta_min = theta_min.max(-sr / (sa - sr));
        }
    }
    if !needs_repair {
        return raw;
    }
    let theta = theta_min + (1.0 - theta_min) * (0.1 + 0.4 * rng.gen::<f64>());
    raw.iter()
        .zip(anchor)
        .map(|(r, a)| (1.0 - theta) * r + theta * a)
        .collect()
}

fn run_restart(
    problem: &ReducedProblem,
    program: &BarrierProgram,
    anchor: &[f64],
    config: &OracleConfig,
    restart: usize,
) -> Result<RestartResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(config.seed, restart));
    let start = random_start(problem, anchor, &mut rng);
    let gap = BARRIER_GAP * problem.horizon * problem.horizon;

    let barrier = program
        .solve(program.lift(&start), gap, config.max_iterations)
        .ok_or(Error::NonConvergence(config.max_iterations))?;
    let mut y = barrier.y;
    let drift = problem.horizon - y.iter().sum::<f64>();
    *y.last_mut().expect("at least two intervals") += drift;

    let mut best = problem.objective(&start);
    let mut best_trace = vec![best];
    for v in barrier.stage_objectives {
        best = best.min(v);
        best_trace.push(best);
    }

    let budget = config.max_iterations - barrier.newton_steps;
    let polish = transfer::polish(problem, &mut y, config.line_search_tol, budget);
    if !polish.converged {
        return Err(Error::NonConvergence(config.max_iterations));
    }
    for v in polish.trace {
        best = best.min(v);
        best_trace.push(best);
    }
    Ok(RestartResult {
        objective: problem.objective(&y),
        y,
        iterations: barrier.newton_steps + polish.sweeps,
        best_trace,
        max_sum_drift: polish.max_sum_drift,
    })
}

/// Minimizes total age numerically over all feasible intervals.
pub fn oracle_solve(instance: &ProblemInstance, config: &OracleConfig) -> Result<OracleOutcome> {
    instance.validate()?;
    config.validate()?;
    let problem = ReducedProblem::new(instance);
    let floor = problem.minimum_horizon();
    if instance.horizon < floor * (1.0 - 1e-12) {
        return Err(Error::Infeasible(format!(
            "T < {floor} (sum of the tight constraint chain)"
        )));
    }

    let Some(anchor) = problem.interior_anchor() else {
        // Empty interior: the tight chain is the only feasible schedule.
        let mut y = problem.chain(0.0);
        let used: f64 = y.iter().sum();
        *y.last_mut().expect("at least two intervals") += instance.horizon - used;
        let objective = problem.objective(&y);
        return Ok(OracleOutcome {
            schedule: problem.schedule(y),
            objective,
            restart: 0,
            iterations: 0,
            best_trace: vec![objective],
            max_sum_drift: 0.0,
        });
    };

    let program = BarrierProgram::new(&problem);
    let results: Vec<Result<RestartResult>> = (0..config.restarts)
        .into_par_iter()
        .map(|k| run_restart(&problem, &program, &anchor, config, k))
        .collect();

    let mut best: Option<(usize, RestartResult)> = None;
    for (k, result) in results.into_iter().enumerate() {
        let result = result?;
        let better = match &best {
            Some((_, b)) => result.objective < b.objective,
            None => true,
        };
        if better {
            best = Some((k, result));
        }
    }
    let (restart, best) = best.expect("at least one restart");
    Ok(OracleOutcome {
        schedule: problem.schedule(best.y),
        objective: best.objective,
        restart,
        iterations: best.iterations,
        best_trace: best.best_trace,
        max_sum_drift: best.max_sum_drift,
    })
}

/// Relative gap `(oracle - closed_form) / closed_form` of the total age.
pub fn compare(instance: &ProblemInstance, config: &OracleConfig) -> Result<f64> {
    let exact = closed_form::solve(instance)?;
    let numeric = oracle_solve(instance, config)?;
    Ok((numeric.objective - exact.total_age) / exact.total_age)
}

/// Draws a random feasible instance of the given mode.
///
/// Ranges: `N` in `[1, 6]`, `T` in `[1, 20]`; constant `c` in `[0, T/N]`;
/// inverse-age `alpha` in `(0, 3]`; proportional `alpha` in `[0.01, 0.49]`
/// and `c` in `(0, T/N]`, redrawn until the instance is feasible.
pub fn random_instance<R: Rng + ?Sized>(kind: ModeKind, rng: &mut R) -> ProblemInstance {
    loop {
        let updates = rng.gen_range(1..=6usize);
        let horizon = rng.gen_range(1.0..=20.0);
        let top = horizon / updates as f64;
        let mode = match kind {
            ModeKind::Constant => ConstraintMode::Constant {
                c_min: rng.gen_range(0.0..=top),
            },
            ModeKind::InverseAge => ConstraintMode::InverseAge {
                alpha: 3.0 * (1.0 - rng.gen::<f64>()),
            },
            ModeKind::ProportionalAge => ConstraintMode::ProportionalAge {
                c: top * (1.0 - rng.gen::<f64>()),
                alpha: rng.gen_range(0.01..=0.49),
            },
        };
        let instance = ProblemInstance {
            horizon,
            updates,
            mode,
        };
        let floor = ReducedProblem::new(&instance).minimum_horizon();
        if horizon > floor * (1.0 + 1e-9) {
            return instance;
        }
    }
}
