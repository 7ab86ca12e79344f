//! Range from transmission loss.
//!
//! `TL = 10 k log10(R) + alpha R / 1000` has no elementary inverse once
//! absorption is present, but it rearranges to `c R e^(c R) = c 10^(TL / 10k)`
//! with `c = alpha ln(10) / (10000 k)`, so `R = W0(c 10^(TL / 10k)) / c`.
//! With `k = 2` the constant is the familiar `20000 / (alpha ln 10)`.

use std::f64::consts::{E, LN_10};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Halley iteration controls for [`lambert_w0_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionSettings {
    /// Stop once `|dw| <= tolerance * |w|`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for InversionSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 50,
        }
    }
}

impl InversionSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-6) {
            return Err(Error::Domain(format!(
                "inversion tolerance must lie in (0, 1e-6], got {}",
                self.tolerance
            )));
        }
        if self.max_iterations < 10 {
            return Err(Error::Domain(format!(
                "max_iterations must be at least 10, got {}",
                self.max_iterations
            )));
        }
        Ok(())
    }
}

/// Principal branch of the Lambert W function on `x >= 0`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    lambert_w0_with(x, &InversionSettings::default())
}

pub fn lambert_w0_with(x: f64, settings: &InversionSettings) -> Result<f64> {
    settings.validate()?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("lambert_w0 needs x >= 0, got {x}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain("lambert_w0 argument overflowed".to_string()));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = initial_guess(x);
    for _ in 0..settings.max_iterations {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= settings.tolerance * w.abs() {
            return Ok(w);
        }
    }
    Err(Error::Convergence {
        x,
        iterations: settings.max_iterations,
    })
}

fn initial_guess(x: f64) -> f64 {
    if x < 1.0 {
        x
    } else if x < E {
        // W is between 0.567 and 1 here.
        (1.0 + x).ln()
    } else {
        let l1 = x.ln();
        l1 - l1.ln()
    }
}

/// Range in metres at which the loss law reaches `tl_db`.
pub fn invert_tl(tl_db: f64, alpha_db_per_km: f64, spreading_factor: f64) -> Result<f64> {
    invert_tl_with(
        tl_db,
        alpha_db_per_km,
        spreading_factor,
        &InversionSettings::default(),
    )
}

pub fn invert_tl_with(
    tl_db: f64,
    alpha_db_per_km: f64,
    spreading_factor: f64,
    settings: &InversionSettings,
) -> Result<f64> {
    if !tl_db.is_finite() {
        return Err(Error::Domain(format!(
            "transmission loss must be finite, got {tl_db}"
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

    let spreading_range = 10f64.powf(tl_db / (10.0 * spreading_factor));
    if alpha_db_per_km == 0.0 {
        return Ok(spreading_range);
    }
    let c = alpha_db_per_km * LN_10 / (10_000.0 * spreading_factor);
    let w = lambert_w0_with(c * spreading_range, settings)?;
    Ok(w / c)
}
