//! Validate analytical ages against the renewal-process simulator: the
//! optimized schedule under zero wait and under its threshold, plus a
//! hand-checkable two-point distribution.
//!
//! ```bash
//! cargo run --release --example monte_carlo_check
//! ```

use aoi_harq::{
    build_dist, epoch_moments, simulate, solve, solve_gamma, AckModel, SdoConfig, SimConfig,
    SimScheme, ServiceTimeDist,
};

fn check(name: &str, dist: &ServiceTimeDist, gamma: f64, seed: u64) {
    let (e_l, e_q) = epoch_moments(dist, gamma);
    let analytical = e_q / e_l;
    let cfg = SimConfig { epochs: 1_000_000, seed, gamma };
    let r = simulate(&cfg, &SimScheme::Service(dist.clone()));
    let sigmas = (r.aoi_estimate - analytical).abs() / r.std_error.max(1e-12);
    println!(
        "{name:<28} analytical {analytical:>9.4}   simulated {:>9.4} +- {:.4}  ({sigmas:.2} sigma)",
        r.aoi_estimate, r.std_error
    );
}

fn main() -> aoi_harq::Result<()> {
    let model = AckModel::gaussian_tbcc(64);
    let sol = solve(&SdoConfig::new(64, 10.0, 192), &model)?;
    let dist = build_dist(&sol.schedule, &model)?;
    let ws = solve_gamma(&dist);

    check("optimal schedule, zero wait", &dist, 0.0, 11);
    check("optimal schedule, gamma*", &dist, ws.gamma_star, 12);

    let two_point = ServiceTimeDist::from_parts(vec![15.0, 30.0], vec![0.5, 0.5])?;
    check("two-point {15,30}", &two_point, 0.0, 13);
    Ok(())
}
