//! Instance resolution from inline flags or a JSON instance file.
//!
//! File format:
//!
//! ```json
//! {"T": 10, "N": 3, "mode": {"type": "constant", "c": 1}}
//! {"T": 10, "N": 3, "mode": {"type": "constant", "beta": 2.0,
//!   "distortion": {"kind": "exponential", "a": 8.4, "b": 1.2, "d": 0.05, "c_max": 2.5}}}
//! ```

use std::path::Path;

use serde::Deserialize;

use super::Failure;
use crate::distortion::DistortionSpec;
use crate::model::{ConstraintMode, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Constant,
    #[serde(alias = "inverse_age", alias = "inverse-age")]
    Inverse,
    #[serde(alias = "proportional_age", alias = "proportional-age")]
    Proportional,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(rename = "T")]
    horizon: f64,
    #[serde(rename = "N")]
    updates: usize,
    mode: ModeFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeFile {
    #[serde(rename = "type")]
    kind: ModeArg,
    c: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    distortion: Option<DistortionSpec>,
}

/// Builds an instance from mode parameters; `c` is the constant floor or the
/// proportional offset.
pub fn build_instance(
    mode: ModeArg,
    horizon: f64,
    updates: usize,
    c: Option<f64>,
    alpha: Option<f64>,
) -> Result<ProblemInstance, Failure> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Failure::Invalid(format!("mode {mode:?} requires --{name}").to_lowercase()))
    };
    let mode = match mode {
        ModeArg::Constant => ConstraintMode::Constant {
            c_min: need(c, "c")?,
        },
        ModeArg::Inverse => ConstraintMode::InverseAge {
            alpha: need(alpha, "alpha")?,
        },
        ModeArg::Proportional => ConstraintMode::ProportionalAge {
            c: need(c, "c")?,
            alpha: need(alpha, "alpha")?,
        },
    };
    Ok(ProblemInstance::new(horizon, updates, mode)?)
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance, Failure> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Failure::Invalid(format!("instance file: {e}")))?;
    let m = file.mode;
    let c = match (m.kind, m.beta, m.distortion) {
        (ModeArg::Constant, Some(beta), Some(spec)) => {
            if m.c.is_some() {
                return Err(Failure::Invalid(
                    "instance file: give either c or beta with distortion, not both".into(),
                ));
            }
            spec.validate()?;
            Some(spec.min_processing_for(beta)?)
        }
        (_, None, None) => m.c,
        _ => {
            return Err(Failure::Invalid(
                "instance file: beta and distortion go together and only with constant mode".into(),
            ))
        }
    };
    build_instance(m.kind, file.horizon, file.updates, c, m.alpha)
}

pub fn read_instance(path: &Path) -> Result<ProblemInstance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}
