//! Processing that may shrink as age grows: `c_i >= (c - alpha y_i)^+`.
//!
//! Walks `T` upward through all four regimes and prints the boundaries.

use aoi_sched::closed_form::{proportional_boundaries, solve_proportional_age};
use aoi_sched::Error;

fn main() -> aoi_sched::Result<()> {
    let (updates, c, alpha) = (3, 1.0, 0.4);
    let b = proportional_boundaries(updates, c, alpha);
    println!(
        "boundaries: chain <= {:.4} < equalized < {:.4} <= capped < {:.4} <= free",
        b.chain, b.capped, b.free
    );

    for horizon in [2.0, 3.0, 6.0, 9.5, 12.0] {
        match solve_proportional_age(horizon, updates, c, alpha) {
            Ok(sol) => println!(
                "T = {horizon:<4} {}  y = {:?}  c = {:?}",
                sol.regime.branch,
                sol.schedule.intervals(),
                sol.schedule.processing()
            ),
            Err(Error::Infeasible(msg)) => println!("T = {horizon:<4} infeasible: {msg}"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
