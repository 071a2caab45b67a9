//! Fixed distortion budget: turn a budget into a processing floor, then
//! schedule the updates around it.
//!
//! Run with `cargo run --example constant_distortion`.

use aoi_sched::closed_form::solve_constant;
use aoi_sched::DistortionSpec;

fn main() -> aoi_sched::Result<()> {
    let spec = DistortionSpec::unit_exponential();
    let (horizon, updates) = (10.0, 3);

    println!("budget  c_min   branch  y");
    for beta in [1.0, 0.75, 0.5, 0.25, 0.1] {
        let c_min = spec.min_processing_for(beta)?;
        match solve_constant(horizon, updates, c_min) {
            Ok(sol) => println!(
                "{beta:<6}  {c_min:<6.3}  {:<6}  {:?}  (A_T = {:.4})",
                sol.regime.branch,
                sol.schedule.intervals(),
                sol.total_age
            ),
            Err(e) => println!("{beta:<6}  {c_min:<6.3}  -       {e}"),
        }
    }
    Ok(())
}
