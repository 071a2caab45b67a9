//! Distortion as estimation error: an update built from `c` noisy sensor
//! reads has the MSE of the best linear estimator. Pick the read count a
//! budget demands, then schedule.

use aoi_sched::closed_form::solve_constant;
use aoi_sched::sensor_fusion_spec;

fn main() -> aoi_sched::Result<()> {
    // unit noise, zero-mean unit-variance signal, up to 10 reads
    let spec = sensor_fusion_spec(1.0, 0.0, 1.0, 10)?;
    for reads in 0..=4 {
        println!("{reads} reads -> mse {:.4}", spec.eval(f64::from(reads))?);
    }

    let (horizon, updates) = (20.0, 4);
    for beta in [0.5, 0.3, 0.2] {
        let c_min = spec.min_processing_for(beta)?;
        let sol = solve_constant(horizon, updates, c_min)?;
        println!(
            "mse <= {beta}: {c_min:.3} reads per update, average age {:.4} ({})",
            sol.total_age / horizon,
            sol.regime.branch
        );
    }
    Ok(())
}
