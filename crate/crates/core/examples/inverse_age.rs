//! Processing that must grow with the age at request time: `c_i >= alpha y_i`.
//!
//! Below `alpha = 1` the first `N` intervals are equal; above it they form a
//! geometric chain and the receiver requests back-to-back.

use aoi_sched::closed_form::{geometric_first_interval, solve_inverse_age};

fn main() -> aoi_sched::Result<()> {
    let (horizon, updates) = (10.0, 3);
    for alpha in [0.5, 1.0, 1.5, 2.5] {
        let sol = solve_inverse_age(horizon, updates, alpha)?;
        let s = &sol.schedule;
        println!("alpha = {alpha} ({})", sol.regime.branch);
        println!("  y = {:?}", s.intervals());
        println!("  c = {:?}", s.processing());
        println!("  s = {:?}", s.request_gaps());
        println!("  average age = {:.4}", s.average_age(horizon));
        if alpha > 1.0 {
            println!(
                "  first interval = {:.6}",
                geometric_first_interval(horizon, updates, alpha)
            );
        }
    }
    Ok(())
}
