//! Block detection and level spread under amplitude-domain AWGN.

use optoloc::channel::{apply_awgn, noise_sigma_ratio, ChannelParams};
use optoloc::localization::average_sil;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> optoloc::Result<()> {
    let channel = ChannelParams::default();
    let sil = channel.level_at(400.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    println!("true SIL at 400 m: {sil:.4} dB");
    println!(
        "{:>6} {:>8} {:>9} {:>12}",
        "SNR", "sigma/p", "detected", "mean_SIL"
    );
    for snr in [-5.0, 0.0, 10.0, 20.0, 40.0] {
        let blocks: Vec<_> = (0..10_000)
            .map(|_| apply_awgn(sil, snr, channel.detection_threshold_db, &mut rng))
            .collect();
        let detected = blocks.iter().filter(|b| b.detected).count();
        println!(
            "{snr:>6.1} {:>8.4} {:>9} {:>12.4}",
            noise_sigma_ratio(snr),
            detected,
            average_sil(&blocks)?
        );
    }
    Ok(())
}
