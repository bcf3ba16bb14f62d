//! Optimal age as a function of the first blocklength: pin N_1, optimize
//! the remaining blocklengths, and report the resulting age curve together
//! with the per-N_1 schedules. Larger first blocklengths need fewer
//! incremental-redundancy rounds to reach the terminal length.
//!
//! ```bash
//! cargo run --release --example age_vs_first_blocklength
//! ```

use aoi_harq::sdo::rho_for_fixed_n1;
use aoi_harq::{AckModel, SdoConfig};

fn main() -> aoi_harq::Result<()> {
    let model = AckModel::gaussian_tbcc(64);
    let cfg = SdoConfig::new(64, 10.0, 192);

    let mut grid: Vec<u32> = (70..=190).step_by(10).chain([118, 119]).collect();
    grid.sort_unstable();

    let mut best: Option<(u32, f64)> = None;
    println!("{:>5}  {:>10}  {:>2}  schedule", "N_1", "rho0*(N_1)", "m");
    for n1 in grid {
        let (rho, sched) = rho_for_fixed_n1(n1, &cfg, &model)?;
        println!(
            "{n1:>5}  {rho:>10.3}  {:>2}  {:?}",
            sched.attempts(),
            sched
                .blocklengths()
                .iter()
                .map(|x| (x * 10.0).round() / 10.0)
                .collect::<Vec<_>>()
        );
        if best.is_none_or(|(_, b)| rho < b) {
            best = Some((n1, rho));
        }
    }

    let (n1, rho) = best.expect("at least one point");
    println!("\nbest sampled first blocklength: N_1 = {n1} with age {rho:.3}");
    Ok(())
}
