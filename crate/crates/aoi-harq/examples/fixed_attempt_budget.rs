//! Constrain the number of transmissions per message. The solver keeps the
//! pinned-N_1 optima whose schedules already fit the budget and picks the
//! best age among them, so a tight budget pushes the first blocklength up.
//!
//! ```bash
//! cargo run --release --example fixed_attempt_budget
//! ```

use aoi_harq::{solve, AckModel, SdoConfig};

fn main() -> aoi_harq::Result<()> {
    let model = AckModel::gaussian_tbcc(64);

    let unconstrained = solve(&SdoConfig::new(64, 10.0, 192), &model)?;
    println!(
        "unconstrained: m = {}, N_1 = {}, rho0* = {:.3}",
        unconstrained.schedule.attempts(),
        unconstrained.n1_star,
        unconstrained.rho_star
    );

    for budget in [6, 5, 4, 3, 2, 1] {
        let mut cfg = SdoConfig::new(64, 10.0, 192);
        cfg.fixed_m = Some(budget);
        let sol = solve(&cfg, &model)?;
        println!(
            "budget m <= {budget}: N_1 = {:>3}, m = {}, rho0* = {:.3}, schedule = {:?}",
            sol.n1_star,
            sol.schedule.attempts(),
            sol.rho_star,
            sol.schedule.blocklengths()
        );
    }
    Ok(())
}
