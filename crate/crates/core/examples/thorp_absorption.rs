//! Absorption and transmission loss across the band.

use optoloc::channel::{thorp_absorption, transmission_loss};

fn main() -> optoloc::Result<()> {
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "f_kHz", "alpha_dB/km", "TL@100m", "TL@1km"
    );
    for f in [1.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        let alpha = thorp_absorption(f)?;
        println!(
            "{f:>8.1} {alpha:>12.6} {:>12.4} {:>12.4}",
            transmission_loss(100.0, alpha, 2.0)?,
            transmission_loss(1000.0, alpha, 2.0)?,
        );
    }
    Ok(())
}
