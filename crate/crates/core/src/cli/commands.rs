use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::render::{join, num, table, trajectory_svg};
use super::{
    Failure, Format, KindArg, ModeArg, OutputArgs, Preset, SolveArgs, SweepArgs, TrajectoryArgs,
    VerifyArgs,
};
use crate::closed_form::{self, solve_constant};
use crate::distortion::{DistortionKind, DistortionSpec};
use crate::model::{ConstraintMode, ModeKind, ProblemInstance};
use crate::oracle::{self, OracleConfig};
use crate::trajectory;

fn pick_format(
    output: &OutputArgs,
    default: Format,
    allowed: &[Format],
    command: &str,
) -> Result<Format, Failure> {
    let format = output.format.unwrap_or(default);
    if !allowed.contains(&format) {
        return Err(Failure::Invalid(
            format!("{command} does not support --format {format:?}").to_lowercase(),
        ));
    }
    Ok(format)
}

/// Writes `text` to `--output` if given, else to `out`.
fn emit(output: &OutputArgs, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match &output.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn describe_mode(mode: &ConstraintMode) -> String {
    match *mode {
        ConstraintMode::Constant { c_min } => format!("constant (c = {})", num(c_min)),
        ConstraintMode::InverseAge { alpha } => format!("inverse (alpha = {})", num(alpha)),
        ConstraintMode::ProportionalAge { c, alpha } => {
            format!("proportional (c = {}, alpha = {})", num(c), num(alpha))
        }
    }
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let format = pick_format(
        &args.output,
        Format::Table,
        &[Format::Table, Format::Csv, Format::JsonLines],
        "solve",
    )?;
    let instance = args.instance.resolve()?;
    let sol = closed_form::solve(&instance)?;
    let s = &sol.schedule;
    let (y, c, gaps) = (s.intervals(), s.processing(), s.request_gaps());
    let avg = s.average_age(instance.horizon);

    let text = match format {
        Format::Table => {
            let rows = vec![
                vec!["mode".into(), describe_mode(&instance.mode)],
                vec!["T".into(), num(instance.horizon)],
                vec!["N".into(), instance.updates.to_string()],
                vec![
                    "branch".into(),
                    format!("{} ({})", sol.regime.branch, sol.regime.condition),
                ],
                vec!["y =".into(), join(y)],
                vec!["c =".into(), join(c)],
                vec!["s =".into(), join(&gaps)],
                vec!["A_T".into(), num(sol.total_age)],
                vec!["avg_age".into(), num(avg)],
            ];
            table(&["field", "value"], &rows)
        }
        Format::Csv => {
            let mut text = String::from("i,y,c,s,branch,total_age,avg_age\n");
            for i in 0..y.len() {
                let ci = c.get(i).map(|&v| num(v)).unwrap_or_default();
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    i + 1,
                    num(y[i]),
                    ci,
                    num(gaps[i]),
                    sol.regime.branch,
                    num(sol.total_age),
                    num(avg)
                ));
            }
            text
        }
        _ => {
            let record = json!({
                "instance": instance,
                "branch": sol.regime.branch.code(),
                "condition": sol.regime.condition,
                "y": y,
                "c": c,
                "s": gaps,
                "total_age": sol.total_age,
                "avg_age": avg,
            });
            format!("{record}\n")
        }
    };
    emit(&args.output, &text, out)
}

#[derive(Debug, Serialize)]
struct Trial {
    mode: ModeKind,
    trial: usize,
    instance: ProblemInstance,
    gap: Option<f64>,
    error: Option<String>,
    pass: bool,
}

fn mode_kinds(mode: Option<ModeArg>) -> Vec<ModeKind> {
    match mode {
        None => ModeKind::ALL.to_vec(),
        Some(ModeArg::Constant) => vec![ModeKind::Constant],
        Some(ModeArg::Inverse) => vec![ModeKind::InverseAge],
        Some(ModeArg::Proportional) => vec![ModeKind::ProportionalAge],
    }
}

fn instance_label(inst: &ProblemInstance) -> String {
    let params = match inst.mode {
        ConstraintMode::Constant { c_min } => format!("c={}", num(c_min)),
        ConstraintMode::InverseAge { alpha } => format!("alpha={}", num(alpha)),
        ConstraintMode::ProportionalAge { c, alpha } => {
            format!("c={} alpha={}", num(c), num(alpha))
        }
    };
    format!("T={} N={} {params}", num(inst.horizon), inst.updates)
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let format = pick_format(
        &args.output,
        Format::Table,
        &[Format::Table, Format::JsonLines],
        "verify",
    )?;
    if args.trials == 0 {
        return Err(Failure::Invalid("--trials must be at least 1".into()));
    }
    if args.restarts == 0 {
        return Err(Failure::Invalid("--restarts must be at least 1".into()));
    }
    if !(args.min_gap <= args.max_gap) {
        return Err(Failure::Invalid(
            "--min-gap must not exceed --max-gap".into(),
        ));
    }

    let mut text = String::new();
    let mut failures = 0;
    for (m, kind) in mode_kinds(args.mode).into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(m as u64 + 1);
        let instances: Vec<ProblemInstance> = (0..args.trials)
            .map(|_| oracle::random_instance(kind, &mut rng))
            .collect();
        let trials: Vec<Trial> = instances
            .par_iter()
            .enumerate()
            .map(|(k, inst)| {
                let config = OracleConfig::with_seed(args.seed.wrapping_add(k as u64))
                    .with_restarts(args.restarts);
                let (gap, error) = match oracle::compare(inst, &config) {
                    Ok(g) => (Some(g), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                let pass = gap.is_some_and(|g| g >= args.min_gap && g <= args.max_gap);
                Trial {
                    mode: kind,
                    trial: k,
                    instance: *inst,
                    gap,
                    error,
                    pass,
                }
            })
            .collect();

        let gaps: Vec<f64> = trials.iter().filter_map(|t| t.gap).collect();
        let failed = trials.iter().filter(|t| !t.pass).count();
        failures += failed;
        let max = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = gaps.iter().sum::<f64>() / gaps.len().max(1) as f64;

        for t in &trials {
            match format {
                Format::JsonLines => {
                    text.push_str(&serde_json::to_string(t).expect("trial serializes"));
                    text.push('\n');
                }
                _ if args.verbose || !t.pass => {
                    let result = match (&t.gap, &t.error) {
                        (Some(g), _) => format!("gap={g:e}"),
                        (None, Some(e)) => format!("error: {e}"),
                        _ => unreachable!("trial has a gap or an error"),
                    };
                    let flag = if t.pass { "ok" } else { "FAIL" };
                    text.push_str(&format!(
                        "{kind} #{} {} {result} {flag}\n",
                        t.trial,
                        instance_label(&t.instance)
                    ));
                }
                _ => {}
            }
        }
        match format {
            Format::JsonLines => {
                let summary = json!({
                    "mode": kind, "trials": args.trials, "max_gap": max, "mean_gap": mean,
                    "min_gap": min, "failures": failed,
                });
                text.push_str(&format!("{summary}\n"));
            }
            _ => text.push_str(&format!(
                "{kind:<12} trials={} max_gap={max:e} mean_gap={mean:e} min_gap={min:e} failures={failed}\n",
                args.trials
            )),
        }
    }
    emit(&args.output, &text, out)?;
    if failures > 0 {
        return Err(Failure::Verification(format!(
            "{failures} instance(s) outside [{:e}, {:e}]",
            args.min_gap, args.max_gap
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct SweepRow {
    beta: f64,
    c_min: Option<f64>,
    total_age: Option<f64>,
    avg_age: Option<f64>,
    regime: String,
}

fn sweep_spec(args: &SweepArgs) -> Result<DistortionSpec, Failure> {
    if let (Some(kind), Some(a), Some(b), Some(d), Some(c_max)) =
        (args.kind, args.a, args.b, args.d, args.c_max)
    {
        let kind = match kind {
            KindArg::Exponential => DistortionKind::Exponential,
            KindArg::InverseLinear => DistortionKind::InverseLinear,
        };
        return Ok(DistortionSpec::new(kind, a, b, d, c_max)?);
    }
    Ok(match args.preset.unwrap_or(Preset::Tradeoff) {
        Preset::Tradeoff => DistortionSpec::tradeoff_preset(),
        Preset::UnitExponential => DistortionSpec::unit_exponential(),
    })
}

fn sweep_row(spec: &DistortionSpec, beta: f64, horizon: f64, updates: usize) -> SweepRow {
    let infeasible = |c_min| SweepRow {
        beta,
        c_min,
        total_age: None,
        avg_age: None,
        regime: "infeasible".into(),
    };
    let Ok(c_min) = spec.min_processing_for(beta) else {
        return infeasible(None);
    };
    match solve_constant(horizon, updates, c_min) {
        Ok(sol) => SweepRow {
            beta,
            c_min: Some(c_min),
            total_age: Some(sol.total_age),
            avg_age: Some(sol.total_age / horizon),
            regime: sol.regime.branch.code().into(),
        },
        Err(_) => infeasible(Some(c_min)),
    }
}

pub fn sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let format = pick_format(
        &args.output,
        Format::Csv,
        &[Format::Csv, Format::Table, Format::JsonLines],
        "sweep",
    )?;
    let spec = sweep_spec(args)?;
    crate::model::validate_horizon(args.horizon, args.updates)?;
    let lo = args.beta_min.unwrap_or_else(|| spec.min_distortion());
    let hi = args.beta_max.unwrap_or_else(|| spec.max_distortion());
    if !(lo >= 0.0 && lo <= hi && hi.is_finite()) || args.steps == 0 {
        return Err(Failure::Invalid(format!(
            "need 0 <= beta_min <= beta_max and steps >= 1, got [{lo}, {hi}] with {} steps",
            args.steps
        )));
    }
    let betas: Vec<f64> = (0..args.steps)
        .map(|k| match (k, args.steps) {
            (_, 1) => lo,
            (k, n) if k + 1 == n => hi,
            (k, n) => lo + (hi - lo) * k as f64 / (n - 1) as f64,
        })
        .collect();
    let rows: Vec<SweepRow> = betas
        .par_iter()
        .map(|&beta| sweep_row(&spec, beta, args.horizon, args.updates))
        .collect();

    let cell = |v: Option<f64>| v.map(num).unwrap_or_default();
    let text = match format {
        Format::Csv => {
            let mut text = String::from("beta,c_min,total_age,avg_age,regime\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    num(r.beta),
                    cell(r.c_min),
                    cell(r.total_age),
                    cell(r.avg_age),
                    r.regime
                ));
            }
            text
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.beta),
                        cell(r.c_min),
                        cell(r.total_age),
                        cell(r.avg_age),
                        r.regime.clone(),
                    ]
                })
                .collect();
            table(&["beta", "c_min", "total_age", "avg_age", "regime"], &cells)
        }
        _ => rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("row serializes") + "\n")
            .collect(),
    };
    emit(&args.output, &text, out)?;
    check_monotone(&rows)
}

/// Average age must not rise as the budget loosens.
fn check_monotone(rows: &[SweepRow]) -> Result<(), Failure> {
    let feasible: Vec<&SweepRow> = rows.iter().filter(|r| r.avg_age.is_some()).collect();
    for w in feasible.windows(2) {
        let (a, b) = (w[0].avg_age.unwrap_or(0.0), w[1].avg_age.unwrap_or(0.0));
        if b > a + 1e-12 * a.abs().max(1.0) {
            return Err(Failure::Verification(format!(
                "avg_age rose from {a} to {b} between beta = {} and {}",
                w[0].beta, w[1].beta
            )));
        }
    }
    Ok(())
}

pub fn trajectory(
    args: &TrajectoryArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let format = pick_format(
        &args.output,
        Format::Csv,
        &[Format::Csv, Format::Svg, Format::JsonLines],
        "trajectory",
    )?;
    let instance = args.instance.resolve()?;
    let sol = closed_form::solve(&instance)?;
    let traj = trajectory::build(&sol.schedule)?;
    let step = args.step.unwrap_or(traj.horizon.max(f64::MIN_POSITIVE));
    let rows = trajectory::sample(&traj, step)?;

    let text = match format {
        Format::Svg => trajectory_svg(&traj),
        Format::Csv => {
            let mut text = String::from("t,age\n");
            for (t, a) in &rows {
                text.push_str(&format!("{},{}\n", num(*t), num(*a)));
            }
            text
        }
        _ => rows
            .iter()
            .map(|(t, a)| format!("{}\n", json!({"t": t, "age": a})))
            .collect(),
    };
    emit(&args.output, &text, out)?;
    // Keep machine output on stdout clean when it is the data channel.
    let note = format!("A_T = {}\n", num(sol.total_age));
    if args.output.output.is_some() {
        out.write_all(note.as_bytes())?;
    } else {
        err.write_all(note.as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(beta: f64, avg: Option<f64>) -> SweepRow {
        SweepRow {
            beta,
            c_min: None,
            total_age: None,
            avg_age: avg,
            regime: String::new(),
        }
    }

    #[test]
    fn monotone_check_skips_infeasible_rows() {
        assert!(
            check_monotone(&[row(0.1, None), row(0.2, Some(3.0)), row(0.3, Some(2.0))]).is_ok()
        );
        assert!(check_monotone(&[row(0.2, Some(2.0)), row(0.3, Some(2.5))]).is_err());
    }

    #[test]
    fn unconstrained_endpoint() {
        let spec = DistortionSpec::tradeoff_preset();
        let r = sweep_row(&spec, spec.max_distortion(), 10.0, 3);
        assert_eq!(r.c_min, Some(0.0));
        assert!((r.avg_age.unwrap() - 10.0 / 8.0).abs() < 1e-12);
        let lin = DistortionSpec::inverse_linear(1.0, 1.0, 1.0, 10.0).unwrap();
        let r = sweep_row(&lin, 0.5 * lin.min_distortion(), 10.0, 3);
        assert_eq!(r.regime, "infeasible");
    }
}
