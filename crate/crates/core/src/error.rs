use thiserror::Error;

/// Errors raised by the solvers, the oracle and the schedule model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// No processing time in `[0, c_max]` brings distortion down to the budget.
    #[error("distortion budget {beta} is below the curve floor {floor} reached at c_max")]
    InfeasibleDistortion { beta: f64, floor: f64 },

    /// Mismatched vector lengths.
    #[error("shape error: {0}")]
    Shape(String),

    /// The instance admits no feasible schedule. The message names the violated bound.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A schedule with a negative request gap cannot be played out in time.
    #[error("infeasible schedule: request gap s_{index} = {gap} is negative")]
    InfeasibleSchedule { index: usize, gap: f64 },

    #[error("oracle did not converge within {0} iterations")]
    NonConvergence(usize),

    /// A closed-form branch produced output violating its own premise.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
