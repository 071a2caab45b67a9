//! Age against distortion budget: the looser the budget, the fresher the
//! receiver can stay. Writes CSV to stdout.

use aoi_sched::closed_form::solve_constant;
use aoi_sched::DistortionSpec;

fn main() {
    let spec = DistortionSpec::tradeoff_preset();
    let (horizon, updates, steps) = (10.0, 3, 20);
    let (lo, hi) = (spec.min_distortion(), spec.max_distortion());

    println!("beta,c_min,avg_age");
    for k in 0..steps {
        let beta = lo + (hi - lo) * k as f64 / (steps - 1) as f64;
        let Ok(c_min) = spec.min_processing_for(beta) else {
            println!("{beta:.6},,");
            continue;
        };
        match solve_constant(horizon, updates, c_min) {
            Ok(sol) => println!("{beta:.6},{c_min:.6},{:.6}", sol.total_age / horizon),
            Err(_) => println!("{beta:.6},{c_min:.6},"),
        }
    }
}
