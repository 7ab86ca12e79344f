//! Monte Carlo RMSE-vs-SNR sweep over the default 500 m cube with 100 nodes.
//!
//! `cargo run --release --example rmse_sweep [trials]` prints the CSV report.

use optoloc::channel::NOISELESS_SNR_DB;
use optoloc::simulation::sweep_snr;
use optoloc::ScenarioConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(20);
    let config = ScenarioConfig {
        snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 30.0, 40.0, NOISELESS_SNR_DB],
        trials,
        ..Default::default()
    };
    let report = sweep_snr(&config)?;
    report.write_csv(std::io::stdout())?;
    Ok(())
}
