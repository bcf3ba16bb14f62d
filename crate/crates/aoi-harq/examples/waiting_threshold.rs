//! Optimal waiting before sampling. After a fast delivery the receiver's
//! information is fresh, and sampling immediately would waste it; waiting up
//! to the threshold gamma* lowers the long-term average age whenever the
//! service time is dispersed enough for the threshold to clear its support.
//!
//! ```bash
//! cargo run --release --example waiting_threshold
//! ```

use aoi_harq::{build_dist, solve, solve_gamma, AckModel, SdoConfig, ServiceTimeDist};

fn main() -> aoi_harq::Result<()> {
    // Optimized schedule: tightly concentrated service times, so the
    // threshold never triggers and zero wait is already optimal.
    let model = AckModel::gaussian_tbcc(64);
    let sol = solve(&SdoConfig::new(64, 10.0, 192), &model)?;
    let dist = build_dist(&sol.schedule, &model)?;
    let ws = solve_gamma(&dist);
    println!("optimized schedule at beta = 10:");
    println!("  gamma* = {:.3} (min service time {:.3})", ws.gamma_star, dist.min_support());
    println!("  age zero-wait = {:.3}, with waiting = {:.3}", ws.aoi_zero_wait, ws.aoi_with_wait);

    // A dispersed service time: mostly fast with a rare slow straggler.
    // Here waiting genuinely pays.
    let dispersed = ServiceTimeDist::from_parts(vec![5.0, 100.0], vec![0.9, 0.1])?;
    let ws = solve_gamma(&dispersed);
    println!("\ndispersed service time (5 w.p. 0.9, 100 w.p. 0.1):");
    println!("  gamma* = {:.3}, eta* = {:.3}", ws.gamma_star, ws.eta_star);
    println!(
        "  age zero-wait = {:.3}, with waiting = {:.3} ({:.1}% better)",
        ws.aoi_zero_wait,
        ws.aoi_with_wait,
        100.0 * (1.0 - ws.aoi_with_wait / ws.aoi_zero_wait)
    );
    Ok(())
}
