//! Acoustic level bookkeeping for a plasma source and a receiving node.
//!
//! Levels are in dB re 1 µPa, ranges in metres, frequencies in kHz and
//! absorption in dB/km. Transmission loss combines geometric spreading with
//! Thorp's seawater absorption, and receiver noise is additive white Gaussian
//! noise applied to the pressure amplitude.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// SNR at or above this value (including `+inf`) is treated as noise free.
pub const NOISELESS_SNR_DB: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub frequency_khz: f64,
    /// 2 for spherical spreading, 1 for cylindrical.
    pub spreading_factor: f64,
    /// Source level, dB re 1 µPa at 1 m.
    pub source_level_db: f64,
    /// Minimum received level for a block to be detected.
    pub detection_threshold_db: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            frequency_khz: 20.0,
            spreading_factor: 2.0,
            source_level_db: 210.0,
            detection_threshold_db: 80.0,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Constraint {
                    key: key.to_string(),
                    message: format!("must be a positive finite number, got {v}"),
                })
            }
        };
        positive("channel.frequency_khz", self.frequency_khz)?;
        positive("channel.spreading_factor", self.spreading_factor)?;
        for (key, v) in [
            ("channel.source_level_db", self.source_level_db),
            (
                "channel.detection_threshold_db",
                self.detection_threshold_db,
            ),
        ] {
            if !v.is_finite() {
                return Err(Error::Constraint {
                    key: key.to_string(),
                    message: format!("must be finite, got {v}"),
                });
            }
        }
        if self.source_level_db <= self.detection_threshold_db {
            return Err(Error::Constraint {
                key: "channel.source_level_db".to_string(),
                message: format!(
                    "must exceed channel.detection_threshold_db ({} <= {})",
                    self.source_level_db, self.detection_threshold_db
                ),
            });
        }
        Ok(())
    }

    /// Thorp absorption at the configured frequency.
    pub fn absorption_db_per_km(&self) -> Result<f64> {
        thorp_absorption(self.frequency_khz)
    }

    /// Noise-free level received at `range_m` from a source of this channel's level.
    pub fn level_at(&self, range_m: f64) -> Result<f64> {
        let alpha = self.absorption_db_per_km()?;
        let tl = transmission_loss(range_m, alpha, self.spreading_factor)?;
        received_sil(self.source_level_db, tl)
    }
}

/// A block's level as seen by the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceivedLevel {
    pub sil_db: f64,
    /// Undetected levels must never reach an estimator.
    pub detected: bool,
}

/// Thorp's empirical seawater absorption coefficient in dB/km, `f` in kHz.
pub fn thorp_absorption(frequency_khz: f64) -> Result<f64> {
    if !(frequency_khz.is_finite() && frequency_khz > 0.0) {
        return Err(Error::Domain(format!(
            "frequency must be positive and finite, got {frequency_khz} kHz"
        )));
    }
    let f2 = frequency_khz * frequency_khz;
    Ok(0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003)
}

/// `TL = 10 k log10(R) + alpha R / 1000`, spreading plus absorption.
pub fn transmission_loss(range_m: f64, alpha_db_per_km: f64, spreading_factor: f64) -> Result<f64> {
    if !(range_m.is_finite() && range_m > 0.0) {
        return Err(Error::Domain(format!(
            "range must be positive and finite, got {range_m} m"
        )));
    }
    if !(alpha_db_per_km.is_finite() && alpha_db_per_km >= 0.0) {
        return Err(Error::Domain(format!(
            "absorption must be non-negative and finite, got {alpha_db_per_km} dB/km"
        )));
    }
    if !(spreading_factor.is_finite() && spreading_factor > 0.0) {
        return Err(Error::Domain(format!(
            "spreading factor must be positive, got {spreading_factor}"
        )));
    }
    Ok(10.0 * spreading_factor * range_m.log10() + alpha_db_per_km * range_m * 1e-3)
}

/// `SIL = SPL - TL`.
pub fn received_sil(spl_db: f64, tl_db: f64) -> Result<f64> {
    let spl = ensure_finite("source level", spl_db)?;
    let tl = ensure_finite("transmission loss", tl_db)?;
    Ok(spl - tl)
}

pub fn is_noiseless(snr_db: f64) -> bool {
    snr_db >= NOISELESS_SNR_DB
}

/// Noise standard deviation relative to the true amplitude, `10^(-snr/20)`.
pub fn noise_sigma_ratio(snr_db: f64) -> f64 {
    if is_noiseless(snr_db) {
        0.0
    } else {
        10f64.powf(-snr_db / 20.0)
    }
}

/// Draws the measured-to-true amplitude ratio `a / p = 1 + n / p`.
///
/// Nothing is drawn from `rng` when the SNR is at the noiseless sentinel.
pub fn amplitude_ratio<R: Rng + ?Sized>(snr_db: f64, rng: &mut R) -> f64 {
    if is_noiseless(snr_db) {
        return 1.0;
    }
    let z: f64 = rng.sample(StandardNormal);
    1.0 + z * noise_sigma_ratio(snr_db)
}

/// Applies amplitude-domain AWGN to a received level.
///
/// A non-positive noisy amplitude loses the block; otherwise the measured
/// level is `sil + 20 log10(a / p)` and must still clear the threshold.
pub fn apply_awgn<R: Rng + ?Sized>(
    sil_db: f64,
    snr_db: f64,
    detection_threshold_db: f64,
    rng: &mut R,
) -> ReceivedLevel {
    if sil_db.is_nan() || snr_db.is_nan() {
        return ReceivedLevel {
            sil_db,
            detected: false,
        };
    }
    let ratio = amplitude_ratio(snr_db, rng);
    if ratio <= 0.0 {
        return ReceivedLevel {
            sil_db: f64::NEG_INFINITY,
            detected: false,
        };
    }
    let measured = sil_db + 20.0 * ratio.log10();
    ReceivedLevel {
        sil_db: measured,
        detected: measured.is_finite() && measured >= detection_threshold_db,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn thorp_spot_values() {
        // 40-digit direct evaluation: 1.18702993870815652..., 0.0690040904657400...
        assert!(close(
            thorp_absorption(10.0).unwrap(),
            1.187_029_938_708_156_5,
            1e-14
        ));
        assert!(close(
            thorp_absorption(1.0).unwrap(),
            0.069_004_090_465_740_06,
            1e-15
        ));
        assert!(close(thorp_absorption(1e-9).unwrap(), 0.003, 1e-15));
        assert!(thorp_absorption(1e-6).unwrap() > 0.003);
    }

    #[test]
    fn thorp_rejects_bad_frequencies() {
        for f in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(thorp_absorption(f), Err(Error::Domain(_))), "{f}");
        }
    }

    #[test]
    fn transmission_loss_examples() {
        assert_eq!(transmission_loss(1.0, 0.0, 2.0).unwrap(), 0.0);
        assert_eq!(transmission_loss(100.0, 0.0, 2.0).unwrap(), 40.0);
        assert!(close(
            transmission_loss(1000.0, 1.18703, 2.0).unwrap(),
            61.18703,
            1e-12
        ));
        assert!(transmission_loss(0.0, 0.0, 2.0).is_err());
        assert!(transmission_loss(-3.0, 0.0, 2.0).is_err());
        assert!(transmission_loss(10.0, -0.1, 2.0).is_err());
    }

    #[test]
    fn absorption_part_is_linear_in_range() {
        let (alpha, k) = (4.2, 2.0);
        let excess = |r: f64| transmission_loss(r, alpha, k).unwrap() - 10.0 * k * r.log10();
        let (a, b, c) = (excess(100.0), excess(600.0), excess(1100.0));
        assert!(close(b - a, c - b, 1e-12));
        assert!(close((b - a) / 500.0, alpha * 1e-3, 1e-15));
    }

    #[test]
    fn received_sil_examples() {
        assert_eq!(received_sil(210.0, 0.0).unwrap(), 210.0);
        assert!(close(
            received_sil(210.0, 61.18703).unwrap(),
            148.81297,
            1e-12
        ));
        assert_eq!(received_sil(0.0, 0.0).unwrap(), 0.0);
        assert!(received_sil(f64::NAN, 1.0).is_err());
        assert!(received_sil(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn sigma_ratio_mapping() {
        assert_eq!(noise_sigma_ratio(20.0), 0.1);
        assert_eq!(noise_sigma_ratio(0.0), 1.0);
        assert_eq!(noise_sigma_ratio(NOISELESS_SNR_DB), 0.0);
        assert_eq!(noise_sigma_ratio(f64::INFINITY), 0.0);
    }

    #[test]
    fn noiseless_awgn_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for snr in [NOISELESS_SNR_DB, f64::INFINITY, 1e6] {
            let lvl = apply_awgn(150.0, snr, 80.0, &mut rng);
            assert_eq!(
                lvl,
                ReceivedLevel {
                    sil_db: 150.0,
                    detected: true
                }
            );
        }
        let below = apply_awgn(79.0, f64::INFINITY, 80.0, &mut rng);
        assert!(!below.detected);
    }

    #[test]
    fn awgn_regression_value() {
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
            (0..3)
                .map(|_| apply_awgn(150.0, 10.0, 80.0, &mut rng))
                .collect::<Vec<_>>()
        };
        let a = run();
        assert_eq!(a, run());
        let frozen = [FROZEN_0, FROZEN_1, FROZEN_2];
        for (lvl, want) in a.iter().zip(frozen) {
            assert!(lvl.detected);
            assert_eq!(
                lvl.sil_db.to_bits(),
                want.to_bits(),
                "{} vs {}",
                lvl.sil_db,
                want
            );
        }
    }
    // Recorded from the first run (ChaCha8, seed 0x5EED, SIL 150 dB, SNR 10 dB).
    const FROZEN_0: f64 = 151.07875535716994;
    const FROZEN_1: f64 = 152.20688157143374;
    const FROZEN_2: f64 = 148.20696559381366;

    #[test]
    fn negative_amplitude_loses_block() {
        // At -40 dB SNR the noise dwarfs the signal; about half the draws go negative.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let levels: Vec<_> = (0..1000)
            .map(|_| apply_awgn(150.0, -40.0, 0.0, &mut rng))
            .collect();
        let lost = levels.iter().filter(|l| !l.detected).count();
        assert!(lost > 400 && lost < 600, "{lost}");
        assert!(levels
            .iter()
            .filter(|l| l.detected)
            .all(|l| l.sil_db.is_finite()));
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::default().validate().is_ok());
        let bad = ChannelParams {
            source_level_db: 70.0,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Constraint { .. })));
        let bad = ChannelParams {
            frequency_khz: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
