//! Scenario configuration and the flat `key = value` file format.
//!
//! ```text
//! # reference scenario
//! node_count = 100
//! track.spacing_m = 10
//! snr_grid_db = 0, 10, 20, 30, 40, inf
//! ```
//!
//! Keys are dotted paths into [`ScenarioConfig`]. Unknown or repeated keys are
//! errors; missing keys keep their defaults.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, NOISELESS_SNR_DB};
use crate::error::{Error, Result};

/// Deployment box. Nodes live in `[0, x] x [0, y] x [0, z]`, z being depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Volume {
    pub x_m: f64,
    pub y_m: f64,
    pub z_m: f64,
}

/// Straight beacon pass along x at fixed `y` and plasma depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Track {
    pub y_m: f64,
    pub depth_m: f64,
    pub x_start_m: f64,
    pub x_end_m: f64,
    pub spacing_m: f64,
    pub blocks_per_source: usize,
}

impl Default for Track {
    fn default() -> Self {
        Self {
            y_m: 0.0,
            depth_m: 1.0,
            x_start_m: -100.0,
            x_end_m: 600.0,
            spacing_m: 10.0,
            blocks_per_source: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub volume: Volume,
    pub node_count: usize,
    pub track: Track,
    pub channel: ChannelParams,
    pub snr_grid_db: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// Standard deviation of the pressure-sensor depth error.
    pub depth_sensor_std_m: f64,
    /// Probability that the directional receiver reports the wrong side.
    pub side_flip_prob: f64,
    /// Minimum pair baseline; `None` means one track spacing.
    pub min_baseline_m: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            volume: Volume {
                x_m: 500.0,
                y_m: 500.0,
                z_m: 500.0,
            },
            node_count: 100,
            track: Track::default(),
            channel: ChannelParams::default(),
            snr_grid_db: vec![0.0, 10.0, 20.0, 30.0, 40.0],
            trials: 20,
            master_seed: 2023,
            depth_sensor_std_m: 0.0,
            side_flip_prob: 0.0,
            min_baseline_m: None,
        }
    }
}

fn constraint(key: &str, message: impl Into<String>) -> Error {
    Error::Constraint {
        key: key.to_string(),
        message: message.into(),
    }
}

impl ScenarioConfig {
    pub fn min_baseline(&self) -> f64 {
        self.min_baseline_m.unwrap_or(self.track.spacing_m)
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("volume.x_m", self.volume.x_m),
            ("volume.y_m", self.volume.y_m),
            ("volume.z_m", self.volume.z_m),
            ("track.spacing_m", self.track.spacing_m),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(constraint(key, format!("must be positive, got {v}")));
            }
        }
        for (key, v) in [
            ("track.y_m", self.track.y_m),
            ("track.x_start_m", self.track.x_start_m),
            ("track.x_end_m", self.track.x_end_m),
        ] {
            if !v.is_finite() {
                return Err(constraint(key, format!("must be finite, got {v}")));
            }
        }
        if !(self.track.depth_m.is_finite() && self.track.depth_m >= 0.0) {
            return Err(constraint(
                "track.depth_m",
                format!("must be >= 0, got {}", self.track.depth_m),
            ));
        }
        if self.node_count == 0 {
            return Err(constraint("node_count", "must be at least 1"));
        }
        if self.track.blocks_per_source == 0 {
            return Err(constraint("track.blocks_per_source", "must be at least 1"));
        }
        if self.track.x_start_m >= self.track.x_end_m {
            return Err(constraint(
                "track.x_start_m",
                "must be less than track.x_end_m",
            ));
        }
        let t = &self.track;
        if t.x_start_m > -t.spacing_m || t.x_end_m < self.volume.x_m + t.spacing_m {
            return Err(constraint(
                "track.x_start_m",
                format!(
                    "track [{}, {}] must extend one spacing beyond the volume's x range [0, {}] on both sides",
                    t.x_start_m, t.x_end_m, self.volume.x_m
                ),
            ));
        }
        self.channel.validate()?;
        if self.snr_grid_db.is_empty() {
            return Err(constraint("snr_grid_db", "must not be empty"));
        }
        if self.snr_grid_db.iter().any(|s| s.is_nan()) {
            return Err(constraint("snr_grid_db", "must not contain NaN"));
        }
        if self.snr_grid_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(constraint("snr_grid_db", "must be strictly increasing"));
        }
        if self.trials == 0 {
            return Err(constraint("trials", "must be at least 1"));
        }
        if !(self.depth_sensor_std_m.is_finite() && self.depth_sensor_std_m >= 0.0) {
            return Err(constraint("depth_sensor_std_m", "must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.side_flip_prob) {
            return Err(constraint("side_flip_prob", "must lie in [0, 1]"));
        }
        if let Some(b) = self.min_baseline_m {
            if !(b.is_finite() && b > 0.0) {
                return Err(constraint(
                    "min_baseline_m",
                    format!("must be positive, got {b}"),
                ));
            }
        }
        Ok(())
    }

    /// Renders the config in the same `key = value` format that
    /// [`parse_config_str`] reads. Every key is written.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key));
        }
        out
    }

    fn get(&self, key: &str) -> String {
        match key {
            "volume.x_m" => self.volume.x_m.to_string(),
            "volume.y_m" => self.volume.y_m.to_string(),
            "volume.z_m" => self.volume.z_m.to_string(),
            "node_count" => self.node_count.to_string(),
            "track.y_m" => self.track.y_m.to_string(),
            "track.depth_m" => self.track.depth_m.to_string(),
            "track.x_start_m" => self.track.x_start_m.to_string(),
            "track.x_end_m" => self.track.x_end_m.to_string(),
            "track.spacing_m" => self.track.spacing_m.to_string(),
            "track.blocks_per_source" => self.track.blocks_per_source.to_string(),
            "channel.frequency_khz" => self.channel.frequency_khz.to_string(),
            "channel.spreading_factor" => self.channel.spreading_factor.to_string(),
            "channel.source_level_db" => self.channel.source_level_db.to_string(),
            "channel.detection_threshold_db" => self.channel.detection_threshold_db.to_string(),
            "snr_grid_db" => self
                .snr_grid_db
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            "trials" => self.trials.to_string(),
            "master_seed" => self.master_seed.to_string(),
            "depth_sensor_std_m" => self.depth_sensor_std_m.to_string(),
            "side_flip_prob" => self.side_flip_prob.to_string(),
            "min_baseline_m" => match self.min_baseline_m {
                Some(b) => b.to_string(),
                None => "auto".to_string(),
            },
            _ => unreachable!("unknown key {key}"),
        }
    }

    fn set(&mut self, key: &str, raw: &str) -> std::result::Result<(), String> {
        match key {
            "volume.x_m" => self.volume.x_m = real(raw)?,
            "volume.y_m" => self.volume.y_m = real(raw)?,
            "volume.z_m" => self.volume.z_m = real(raw)?,
            "node_count" => self.node_count = count(key, raw)?,
            "track.y_m" => self.track.y_m = real(raw)?,
            "track.depth_m" => self.track.depth_m = real(raw)?,
            "track.x_start_m" => self.track.x_start_m = real(raw)?,
            "track.x_end_m" => self.track.x_end_m = real(raw)?,
            "track.spacing_m" => self.track.spacing_m = real(raw)?,
            "track.blocks_per_source" => self.track.blocks_per_source = count(key, raw)?,
            "channel.frequency_khz" => self.channel.frequency_khz = real(raw)?,
            "channel.spreading_factor" => self.channel.spreading_factor = real(raw)?,
            "channel.source_level_db" => self.channel.source_level_db = real(raw)?,
            "channel.detection_threshold_db" => self.channel.detection_threshold_db = real(raw)?,
            "snr_grid_db" => {
                self.snr_grid_db = if raw.is_empty() {
                    Vec::new()
                } else {
                    raw.split(',')
                        .map(|s| snr(s.trim()))
                        .collect::<std::result::Result<_, _>>()?
                }
            }
            "trials" => self.trials = count(key, raw)?,
            "master_seed" => self.master_seed = seed(raw)?,
            "depth_sensor_std_m" => self.depth_sensor_std_m = real(raw)?,
            "side_flip_prob" => self.side_flip_prob = real(raw)?,
            "min_baseline_m" => {
                self.min_baseline_m = if raw == "auto" {
                    None
                } else {
                    Some(real(raw)?)
                }
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}

const KEYS: [&str; 20] = [
    "volume.x_m",
    "volume.y_m",
    "volume.z_m",
    "node_count",
    "track.y_m",
    "track.depth_m",
    "track.x_start_m",
    "track.x_end_m",
    "track.spacing_m",
    "track.blocks_per_source",
    "channel.frequency_khz",
    "channel.spreading_factor",
    "channel.source_level_db",
    "channel.detection_threshold_db",
    "snr_grid_db",
    "trials",
    "master_seed",
    "depth_sensor_std_m",
    "side_flip_prob",
    "min_baseline_m",
];

fn real(raw: &str) -> std::result::Result<f64, String> {
    let v: f64 = raw
        .parse()
        .map_err(|_| format!("`{raw}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{raw}` is not finite"))
    }
}

fn count(key: &str, raw: &str) -> std::result::Result<usize, String> {
    let v: i64 = raw
        .parse()
        .map_err(|_| format!("`{key}` expects an integer, got `{raw}`"))?;
    if v < 1 {
        return Err(format!("`{key}` must be at least 1, got {v}"));
    }
    usize::try_from(v).map_err(|_| format!("`{key}` is too large: {v}"))
}

fn seed(raw: &str) -> std::result::Result<u64, String> {
    let parsed = match raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => raw.parse(),
    };
    parsed.map_err(|_| format!("`{raw}` is not an unsigned 64-bit seed"))
}

/// Accepts `inf`/`noiseless` for the noise-free row, stored as the sentinel.
fn snr(raw: &str) -> std::result::Result<f64, String> {
    match raw.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "noiseless" => Ok(NOISELESS_SNR_DB),
        _ => {
            let v = real(raw)?;
            Ok(v.min(NOISELESS_SNR_DB))
        }
    }
}

/// Parses config text. Defaults fill missing keys; the result is validated.
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::default();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(Error::Config {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        config.set(key, value).map_err(|message| Error::Config {
            line: line_no,
            message,
        })?;
    }
    config.validate()?;
    Ok(config)
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse_config_str("").unwrap(), ScenarioConfig::default());
        assert_eq!(
            parse_config_str("# nothing\n\n   \n").unwrap(),
            ScenarioConfig::default()
        );
    }

    #[test]
    fn node_count_key() {
        let c = parse_config_str("node_count = 100").unwrap();
        assert_eq!(c.node_count, 100);
        let c = parse_config_str("node_count = 7 # few").unwrap();
        assert_eq!(c.node_count, 7);
    }

    #[test]
    fn negative_count_names_the_key() {
        let err = parse_config_str("\nnode_count = -5").unwrap_err();
        match err {
            Error::Config { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("node_count"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_and_malformed() {
        assert!(matches!(
            parse_config_str("track.spacin_m = 10"),
            Err(Error::Config { line: 1, .. })
        ));
        assert!(matches!(
            parse_config_str("trials 10"),
            Err(Error::Config { line: 1, .. })
        ));
        assert!(matches!(
            parse_config_str("channel.frequency_khz = ten"),
            Err(Error::Config { .. })
        ));
        assert!(matches!(
            parse_config_str("trials = 2\ntrials = 3"),
            Err(Error::Config { line: 2, .. })
        ));
    }

    #[test]
    fn cross_field_constraints() {
        let err = parse_config_str("snr_grid_db = 10, 0").unwrap_err();
        assert!(matches!(err, Error::Constraint { ref key, .. } if key == "snr_grid_db"));
        let err = parse_config_str("track.x_start_m = 0").unwrap_err();
        assert!(matches!(err, Error::Constraint { .. }));
        let err = parse_config_str("channel.source_level_db = 70").unwrap_err();
        assert!(
            matches!(err, Error::Constraint { ref key, .. } if key == "channel.source_level_db")
        );
        assert!(parse_config_str("side_flip_prob = 1.5").is_err());
    }

    #[test]
    fn snr_grid_and_seed_forms() {
        let c = parse_config_str("snr_grid_db = -5, 5.5, inf\nmaster_seed = 0xff").unwrap();
        assert_eq!(c.snr_grid_db, vec![-5.0, 5.5, NOISELESS_SNR_DB]);
        assert_eq!(c.master_seed, 255);
    }

    #[test]
    fn text_round_trip() {
        let mut c = ScenarioConfig::default();
        c.track.spacing_m = 12.5;
        c.min_baseline_m = Some(20.0);
        c.snr_grid_db = vec![-3.0, 0.25, NOISELESS_SNR_DB];
        c.master_seed = u64::MAX;
        assert_eq!(parse_config_str(&c.to_config_text()).unwrap(), c);
        let d = ScenarioConfig::default();
        assert_eq!(parse_config_str(&d.to_config_text()).unwrap(), d);
    }
}
