//! Build the sawtooth age curve of an optimal schedule, integrate it, and
//! write an SVG plot next to the working directory.

use aoi_sched::cli::trajectory_svg;
use aoi_sched::closed_form::solve_inverse_age;
use aoi_sched::trajectory::{build, integrate, sample};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sol = solve_inverse_age(10.0, 3, 0.5)?;
    let traj = build(&sol.schedule)?;

    for b in traj.breakpoints.iter().filter(|b| b.is_drop()) {
        println!(
            "receipt at t = {:.3}: age {:.3} -> {:.3}",
            b.t, b.age_before, b.age_after
        );
    }
    println!(
        "area under curve = {:.6}, total age = {:.6}",
        integrate(&traj),
        sol.total_age
    );
    println!("{} samples at step 0.5", sample(&traj, 0.5)?.len());

    let path = std::env::temp_dir().join("aoi_trajectory.svg");
    std::fs::write(&path, trajectory_svg(&traj))?;
    println!("plot written to {}", path.display());
    Ok(())
}
