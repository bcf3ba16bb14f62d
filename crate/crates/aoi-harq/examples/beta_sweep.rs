//! Scheme comparison across processing delays, as produced by the
//! `aoi-harq sweep` subcommand. The optimized schedule dominates bit-by-bit
//! incremental redundancy and plain repetition everywhere; repetition with
//! message replacement eventually wins once the per-attempt delay is so
//! large that replacing stale messages matters more than saving bits.
//!
//! ```bash
//! cargo run --release --example beta_sweep
//! ```

use aoi_harq::cli::sweep_rows_at;
use aoi_harq::AckModel;

fn main() {
    let model = AckModel::gaussian_tbcc(64);
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14}",
        "beta", "harq", "iir", "fr-no-replace", "fr-replace"
    );
    for beta in (0..=150).step_by(30) {
        let rows = sweep_rows_at(f64::from(beta), 64, 192, &model);
        let get = |scheme: &str| {
            rows.iter()
                .find(|r| r.scheme == scheme)
                .and_then(|r| r.aoi_with_wait.or(r.aoi_zero_wait))
                .map_or("-".into(), |v| format!("{v:.2}"))
        };
        println!(
            "{beta:>6} {:>14} {:>14} {:>14} {:>14}",
            get("harq"),
            get("iir"),
            get("fr-no-replace"),
            get("fr-replace")
        );
    }
}
