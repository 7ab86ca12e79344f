//! Transmission loss to range through the Lambert W function, and back.

use optoloc::channel::{thorp_absorption, transmission_loss};
use optoloc::ranging::{invert_tl, lambert_w0};

fn main() -> optoloc::Result<()> {
    println!("W0(1) = {}", lambert_w0(1.0)?);
    println!("W0(e) = {}", lambert_w0(std::f64::consts::E)?);

    let alpha = thorp_absorption(20.0)?;
    println!("\nalpha(20 kHz) = {alpha} dB/km");
    println!(
        "{:>10} {:>14} {:>16} {:>10}",
        "TL_dB", "range_m", "TL(range)_dB", "rel_err"
    );
    for tl in [20.0, 40.0, 60.0, 80.0, 100.0, 120.0] {
        let r = invert_tl(tl, alpha, 2.0)?;
        let back = transmission_loss(r, alpha, 2.0)?;
        println!(
            "{tl:>10.1} {r:>14.6} {back:>16.12} {:>10.1e}",
            (back - tl).abs() / tl
        );
    }
    Ok(())
}
