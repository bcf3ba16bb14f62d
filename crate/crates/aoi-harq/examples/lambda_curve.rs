//! Trace the Dinkelbach auxiliary objective p(lambda) and the optimal mean
//! service time E[tau_lambda] across the multiplier range: p falls, the mean
//! rises, and the optimal age is p + lambda at their crossing.
//!
//! ```bash
//! cargo run --release --example lambda_curve
//! ```

use aoi_harq::sdo::p_lambda;
use aoi_harq::{build_dist, solve, AckModel, SdoConfig};

fn main() -> aoi_harq::Result<()> {
    let model = AckModel::gaussian_tbcc(64);
    let cfg = SdoConfig::new(64, 10.0, 192);

    println!("{:>8}  {:>12}  {:>12}", "lambda", "p(lambda)", "E[tau]");
    for i in 0..=16 {
        let lambda = 8.0 * i as f64;
        let (p, sched) = p_lambda(lambda, &cfg, &model)?;
        let mean = build_dist(&sched, &model)?.mean();
        println!("{lambda:>8.1}  {p:>12.3}  {mean:>12.3}");
    }

    let sol = solve(&cfg, &model)?;
    println!();
    println!(
        "crossing: lambda* = {:.3}, p(lambda*) = {:.3}, rho0* = {:.3}",
        sol.lambda_star, sol.p_of_lambda, sol.rho_star
    );
    Ok(())
}
