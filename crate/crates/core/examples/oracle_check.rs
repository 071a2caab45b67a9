//! Cross-check the closed forms against the numerical oracle on random
//! instances of every mode.

use aoi_sched::model::ModeKind;
use aoi_sched::oracle::{compare, random_instance, OracleConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> aoi_sched::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for kind in ModeKind::ALL {
        let mut worst: f64 = 0.0;
        for trial in 0..20 {
            let instance = random_instance(kind, &mut rng);
            let gap = compare(&instance, &OracleConfig::with_seed(trial).with_restarts(10))?;
            worst = worst.max(gap.abs());
        }
        println!("{kind:<12} worst |gap| over 20 instances: {worst:.2e}");
    }
    Ok(())
}
