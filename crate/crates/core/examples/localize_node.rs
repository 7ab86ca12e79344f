//! One node, one beacon pass: observations, selected pair and position fix.

use optoloc::channel::NOISELESS_SNR_DB;
use optoloc::localization::localize_node;
use optoloc::simulation::{build_track, noise_rng, observe_node};
use optoloc::ScenarioConfig;

fn main() -> optoloc::Result<()> {
    let config = ScenarioConfig::default();
    let track = build_track(&config);
    let truth = [237.0, 140.0, 310.0];
    println!(
        "true position {truth:?}, {} sources on the track",
        track.len()
    );

    for snr in [10.0, 20.0, 40.0, NOISELESS_SNR_DB] {
        let mut rng = noise_rng(config.master_seed, 0, 0);
        let observations = observe_node(&config, &track, truth, snr, &mut rng);
        let fix = localize_node(
            &observations,
            truth[2],
            &config.channel,
            config.min_baseline(),
        )?;
        let (a, b) = (
            observations[fix.pair.0].source.x_m,
            observations[fix.pair.1].source.x_m,
        );
        let err = ((fix.x_m - truth[0]).powi(2) + (fix.y_m - truth[1]).powi(2)).sqrt();
        println!(
            "SNR {snr:>5}: pair x=({a}, {b}) -> ({:.2}, {:.2}, {:.2}) error {err:.2} m{}",
            fix.x_m,
            fix.y_m,
            fix.z_m,
            if fix.degenerate { " [degenerate]" } else { "" }
        );
    }
    Ok(())
}
