//! Command-line front end shared by the `optoloc` binary and its tests.
//!
//! Exit codes: 0 success, 1 usage or config parse error, 2 runtime error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};

use crate::channel::thorp_absorption;
use crate::config::parse_config;
use crate::ranging::invert_tl;
use crate::simulation::{sweep_snr_with, Execution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "optoloc",
    version,
    about = "Optoacoustic underwater node localization testbed"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an RMSE-vs-SNR Monte Carlo sweep and write the report.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Overrides `master_seed` from the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Run trials on the calling thread only.
        #[arg(long)]
        serial: bool,
    },
    /// Invert a transmission loss (dB) to range (m).
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        tl: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        k: f64,
    },
    /// Thorp absorption (dB/km) at a frequency in kHz.
    Absorb {
        #[arg(long = "freq-khz", allow_hyphen_values = true)]
        freq_khz: f64,
    },
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match cli.command {
        Command::Simulate {
            config,
            out,
            format,
            seed,
            serial,
        } => {
            let execution = if serial {
                Execution::Serial
            } else {
                Execution::Parallel
            };
            cmd_simulate(&config, &out, format, seed, execution, stderr)
        }
        Command::Invert { tl, alpha, k } => cmd_invert(tl, alpha, k, stdout, stderr),
        Command::Absorb { freq_khz } => cmd_absorb(freq_khz, stdout, stderr),
    }
}

pub fn cmd_simulate(
    config_path: &Path,
    out_path: &Path,
    format: Format,
    seed: Option<u64>,
    execution: Execution,
    stderr: &mut dyn Write,
) -> i32 {
    let mut config = match parse_config(config_path) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", config_path.display());
            return EXIT_USAGE;
        }
    };
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    let report = match sweep_snr_with(&config, execution) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_RUNTIME;
        }
    };
    let body = match format {
        Format::Csv => report.to_csv_string(),
        Format::Json => match report.to_json_string() {
            Ok(mut s) => {
                s.push('\n');
                s
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot encode report: {e}");
                return EXIT_RUNTIME;
            }
        },
    };
    if let Err(e) = std::fs::write(out_path, body) {
        let _ = writeln!(stderr, "error: cannot write {}: {e}", out_path.display());
        return EXIT_RUNTIME;
    }
    EXIT_OK
}

pub fn cmd_invert(
    tl_db: f64,
    alpha: f64,
    k: f64,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    match invert_tl(tl_db, alpha, k) {
        Ok(r) => {
            let _ = writeln!(stdout, "{r}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_RUNTIME
        }
    }
}

pub fn cmd_absorb(frequency_khz: f64, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match thorp_absorption(frequency_khz) {
        Ok(a) => {
            let _ = writeln!(stdout, "{a}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_RUNTIME
        }
    }
}
