//! RMSE-vs-SNR report and its CSV/JSON encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;

pub const CSV_HEADER: [&str; 5] = [
    "snr_db",
    "rmse_m",
    "localized_fraction",
    "degenerate_fraction",
    "mean_abs_x_error_m",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmseRow {
    pub snr_db: f64,
    /// Mean over trials of the per-trial RMSE of localized nodes.
    pub rmse_m: f64,
    /// Localized node-trials over all node-trials.
    pub localized_fraction: f64,
    /// Share of localized nodes whose geometry was clamped.
    pub degenerate_fraction: f64,
    pub mean_abs_x_error_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseReport {
    pub rows: Vec<RmseRow>,
    pub config_echo: ScenarioConfig,
}

impl RmseReport {
    /// Writes the rows as CSV. Floats use Rust's shortest round-trip form.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(CSV_HEADER)?;
        for row in &self.rows {
            writer.write_record(
                [
                    row.snr_db,
                    row.rmse_m,
                    row.localized_fraction,
                    row.degenerate_fraction,
                    row.mean_abs_x_error_m,
                ]
                .map(|v| v.to_string()),
            )?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    pub fn to_json_string(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
