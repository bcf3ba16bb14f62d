//! Optimize against a tabulated ACK model loaded from CSV instead of the
//! built-in analytic fit. The table interpolates linearly and must be
//! strictly increasing in both columns.
//!
//! ```bash
//! cargo run --release --example table_model
//! ```

use std::path::Path;

use aoi_harq::{solve, AckModel, SdoConfig};

fn main() -> aoi_harq::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/tbcc_2db_k64.csv");
    let table = AckModel::from_csv(&path, 64)?;
    println!("loaded table model from {}", path.display());
    println!(
        "P(96) = {:.4}, P(128) = {:.4}, P(192) = {:.6}",
        table.ack_prob(96.0)?,
        table.ack_prob(128.0)?,
        table.ack_prob(192.0)?
    );

    let sol = solve(&SdoConfig::new(64, 10.0, 192), &table)?;
    println!("\ntable model optimum:    rho0* = {:.3}, schedule {:?}", sol.rho_star, sol.schedule.blocklengths());

    let fit = solve(&SdoConfig::new(64, 10.0, 192), &AckModel::gaussian_tbcc(64))?;
    println!("analytic fit optimum:   rho0* = {:.3}, schedule {:?}", fit.rho_star, fit.schedule.blocklengths());
    println!(
        "\nthe 8-bit table resolution costs {:.1}% of age vs the analytic fit",
        100.0 * (sol.rho_star / fit.rho_star - 1.0)
    );
    Ok(())
}
