//! The sawtooth age curve `a(t)` implied by a schedule.
//!
//! Age starts at zero, grows with slope one, and at the receipt of update `i`
//! drops instantly to that update's own age `c_i`. Drops are stored as
//! dual-valued breakpoints so the curve integrates exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breakpoint {
    pub t: f64,
    pub age_before: f64,
    pub age_after: f64,
}

impl Breakpoint {
    pub fn is_drop(&self) -> bool {
        self.age_after < self.age_before
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgeTrajectory {
    /// Start, each receipt, and the horizon, with strictly increasing `t`.
    pub breakpoints: Vec<Breakpoint>,
    /// Request instants `G_{i-1} + s_i`. Age does not change at a request.
    pub requests: Vec<f64>,
    pub horizon: f64,
}

/// Plays the schedule out in time.
pub fn build(schedule: &Schedule) -> Result<AgeTrajectory> {
    let gaps = schedule.request_gaps();
    if let Some((i, &gap)) = gaps.iter().enumerate().find(|(_, &s)| s < 0.0) {
        return Err(Error::InfeasibleSchedule { index: i + 1, gap });
    }
    let c = schedule.processing();

    let mut breakpoints = vec![Breakpoint {
        t: 0.0,
        age_before: 0.0,
        age_after: 0.0,
    }];
    let mut requests = Vec::with_capacity(c.len());
    let mut t = 0.0;
    let mut age = 0.0;
    for (i, &ci) in c.iter().enumerate() {
        requests.push(t + gaps[i]);
        let run = gaps[i] + ci;
        t += run;
        age += run;
        push_point(&mut breakpoints, t, age, ci);
        age = ci;
    }
    let last = gaps[c.len()];
    t += last;
    age += last;
    push_point(&mut breakpoints, t, age, age);

    Ok(AgeTrajectory {
        breakpoints,
        requests,
        horizon: t,
    })
}

/// Appends a breakpoint, merging it into the previous one when both fall at
/// the same instant.
fn push_point(points: &mut Vec<Breakpoint>, t: f64, before: f64, after: f64) {
    let prev = points.last_mut().expect("start point present");
    if t <= prev.t {
        prev.age_after = after;
        return;
    }
    points.push(Breakpoint {
        t,
        age_before: before,
        age_after: after,
    });
}

/// Exact area under the curve: one trapezoid per segment between breakpoints.
pub fn integrate(traj: &AgeTrajectory) -> f64 {
    traj.breakpoints
        .windows(2)
        .map(|w| 0.5 * (w[0].age_after + w[1].age_before) * (w[1].t - w[0].t))
        .sum()
}

/// Samples `(t, age)` every `step` time units within each segment, always
/// including segment ends. A drop yields two rows at the same `t`: the value
/// just before, then just after.
pub fn sample(traj: &AgeTrajectory, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!(
            "sampling step must be > 0, got {step}"
        )));
    }
    let mut rows = Vec::new();
    let first = traj.breakpoints[0];
    rows.push((first.t, first.age_after));
    for w in traj.breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut k = 1.0;
        loop {
            let t = a.t + k * step;
            // Skip samples that would collide with the segment end.
            if t >= b.t - 1e-12 * step {
                break;
            }
            rows.push((t, a.age_after + (t - a.t)));
            k += 1.0;
        }
        rows.push((b.t, b.age_before));
        if b.age_after != b.age_before {
            rows.push((b.t, b.age_after));
        }
    }
    Ok(rows)
}
