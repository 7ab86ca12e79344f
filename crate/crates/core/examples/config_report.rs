//! Scenario from `key = value` text to a JSON report with the config echo.

use optoloc::config::parse_config_str;
use optoloc::simulation::sweep_snr;

const SCENARIO: &str = "
# small, quick scenario
node_count = 25
trials = 4
channel.frequency_khz = 10
snr_grid_db = 10, 30, inf
master_seed = 7
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config_str(SCENARIO)?;
    let report = sweep_snr(&config)?;
    println!("{}", report.to_json_string()?);
    Ok(())
}
