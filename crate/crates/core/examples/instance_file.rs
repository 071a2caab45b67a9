//! Instances described in JSON, the same format `aoi-sched solve --input` reads.

use aoi_sched::cli::parse_instance;
use aoi_sched::{check_feasibility, solve};

const INSTANCES: &[&str] = &[
    r#"{"T": 10, "N": 3, "mode": {"type": "constant", "c": 2.5}}"#,
    r#"{"T": 10, "N": 3, "mode": {"type": "inverse", "alpha": 1.5}}"#,
    r#"{"T": 6, "N": 3, "mode": {"type": "proportional", "c": 1, "alpha": 0.4}}"#,
    r#"{"T": 10, "N": 3, "mode": {"type": "constant", "beta": 0.5,
        "distortion": {"kind": "exponential", "a": 1.5819767068693265, "b": 0.25,
                       "d": 0.36787944117144233, "c_max": 4}}}"#,
];

fn main() {
    for text in INSTANCES {
        let instance = match parse_instance(text) {
            Ok(i) => i,
            Err(e) => {
                println!("rejected: {e:?}");
                continue;
            }
        };
        let sol = solve(&instance).expect("example instances are feasible");
        let report = check_feasibility(&instance, &sol.schedule, 1e-9).expect("shapes match");
        println!(
            "{:<12} T = {:<3} branch {:<8} A_T = {:.4}  {report}",
            instance.mode.kind(),
            instance.horizon,
            sol.regime.branch,
            sol.total_age
        );
    }
}
