//! Compare the optimized schedule against the classic transmission schemes
//! at one processing delay: bit-by-bit incremental redundancy and
//! fixed-length repetition with and without message replacement.
//!
//! ```bash
//! cargo run --release --example baseline_comparison
//! ```

use aoi_harq::baselines::default_iir_cap;
use aoi_harq::{fr_no_replace_aoi, fr_replace_aoi, iir_aoi, solve, AckModel, SdoConfig};

fn main() -> aoi_harq::Result<()> {
    let model = AckModel::gaussian_tbcc(64);
    let beta = 10.0;

    let harq = solve(&SdoConfig::new(64, beta, 192), &model)?;
    let cap = default_iir_cap(&model)?;
    let iir = iir_aoi(64, beta, &model, cap)?;
    let fr_no = fr_no_replace_aoi(64, beta, &model, 64..=256)?;
    let fr_re = fr_replace_aoi(64, beta, &model, 64..=256)?;

    println!("{:<16} {:>5} {:>12} {:>12}", "scheme", "N_1", "age", "gamma*");
    println!(
        "{:<16} {:>5} {:>12.3} {:>12}",
        "harq (optimal)", harq.n1_star, harq.rho_star, "-"
    );
    for r in [&iir, &fr_no, &fr_re] {
        println!(
            "{:<16} {:>5} {:>12.3} {:>12}",
            r.scheme.to_string(),
            r.n1_star,
            r.aoi,
            r.gamma_star.map_or("-".to_string(), |g| format!("{g:.3}")),
        );
    }

    println!();
    println!(
        "optimized schedule beats IIR by {:.1}% and repetition by {:.1}%",
        100.0 * (1.0 - harq.rho_star / iir.aoi),
        100.0 * (1.0 - harq.rho_star / fr_no.aoi)
    );
    Ok(())
}
