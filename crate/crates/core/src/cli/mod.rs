//! The `aoi-sched` command line: `solve`, `verify`, `sweep` and `trajectory`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 infeasible instance,
//! 3 verification failure.

mod commands;
mod input;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::model::ProblemInstance;

pub use input::{parse_instance, ModeArg};
pub use render::{num as format_number, trajectory_svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Why a command stopped early, mapped one-to-one onto exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Invalid(String),
    Infeasible(String),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Infeasible(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Shape(_) => Failure::Invalid(e.to_string()),
            Error::Infeasible(_)
            | Error::InfeasibleDistortion { .. }
            | Error::InfeasibleSchedule { .. } => Failure::Infeasible(e.to_string()),
            Error::NonConvergence(_) | Error::Internal(_) => Failure::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "aoi-sched",
    version,
    about = "Age-optimal update scheduling under processing constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance in closed form.
    Solve(SolveArgs),
    /// Compare closed forms against the numerical oracle on random instances.
    Verify(VerifyArgs),
    /// Sweep a distortion budget and report the age it costs.
    Sweep(SweepArgs),
    /// Emit the age curve of the optimal schedule.
    Trajectory(TrajectoryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    JsonLines,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    #[arg(long, value_enum, required_unless_present = "input")]
    pub mode: Option<ModeArg>,
    /// Horizon.
    #[arg(long = "T", required_unless_present = "input")]
    pub horizon: Option<f64>,
    /// Number of updates.
    #[arg(long = "N", required_unless_present = "input")]
    pub updates: Option<usize>,
    /// Constant processing floor, or the offset of the proportional rule.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// JSON instance file instead of inline flags.
    #[arg(long, conflicts_with_all = ["mode", "horizon", "updates", "c", "alpha"])]
    pub input: Option<PathBuf>,
}

impl InstanceArgs {
    pub fn resolve(&self) -> Result<ProblemInstance, Failure> {
        if let Some(path) = &self.input {
            return input::read_instance(path);
        }
        match (self.mode, self.horizon, self.updates) {
            (Some(mode), Some(t), Some(n)) => input::build_instance(mode, t, n, self.c, self.alpha),
            _ => Err(Failure::Invalid(
                "need --mode, --T and --N, or --input".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random instances per mode.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, env = "AOI_SCHED_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Restrict to one mode.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Oracle restarts per instance.
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    /// Smallest accepted relative gap (oracle minus closed form).
    #[arg(long, default_value_t = -1e-6, allow_negative_numbers = true)]
    pub min_gap: f64,
    /// Largest accepted relative gap.
    #[arg(long, default_value_t = 1e-3)]
    pub max_gap: f64,
    /// Print one line per instance.
    #[arg(long)]
    pub verbose: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Tradeoff,
    UnitExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Exponential,
    InverseLinear,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Named distortion curve; defaults to `tradeoff` when no explicit curve is given.
    #[arg(long, value_enum, conflicts_with_all = ["kind", "a", "b", "d", "c_max"])]
    pub preset: Option<Preset>,
    #[arg(long, value_enum, requires_all = ["a", "b", "d", "c_max"])]
    pub kind: Option<KindArg>,
    #[arg(long, requires = "kind")]
    pub a: Option<f64>,
    #[arg(long, requires = "kind")]
    pub b: Option<f64>,
    #[arg(long, requires = "kind", allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long, requires = "kind")]
    pub c_max: Option<f64>,
    /// First budget; defaults to the distortion at `c_max`.
    #[arg(long, allow_negative_numbers = true)]
    pub beta_min: Option<f64>,
    /// Last budget; defaults to the distortion at zero processing.
    #[arg(long, allow_negative_numbers = true)]
    pub beta_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long = "T")]
    pub horizon: f64,
    #[arg(long = "N")]
    pub updates: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Extra samples every `step` time units between breakpoints.
    #[arg(long)]
    pub step: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (program name first), runs the command, and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Solve(a) => commands::solve(a, out),
        Command::Verify(a) => commands::verify(a, out),
        Command::Sweep(a) => commands::sweep(a, out),
        Command::Trajectory(a) => commands::trajectory(a, out, err),
    }
}
