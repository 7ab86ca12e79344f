//! Monte Carlo harness: random deployment, beacon pass, SNR sweep, RMSE.
//!
//! Every trial draws from ChaCha8 streams keyed by
//! `(master_seed, snr_index, trial_index)`, so a sweep gives the same numbers
//! whether trials run serially, in parallel, or in any order. Node positions
//! are keyed by `(master_seed, trial_index)` only, so all SNR rows see the same
//! deployments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::apply_awgn;
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::localization::{
    average_sil, localize_node, NodeObservation, PlasmaSource, PositionEstimate,
};
use crate::report::{RmseReport, RmseRow};

/// True node position `[x, y, z]`, z being depth.
pub type Point3 = [f64; 3];

const STREAM_DEPLOY: u64 = 0x6465_706c_6f79;
const STREAM_NOISE: u64 = 0x006e_6f69_7365;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Outcome for one node in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeResult {
    pub truth: Point3,
    pub outcome: Result<PositionEstimate>,
}

impl NodeResult {
    pub fn estimate(&self) -> Option<&PositionEstimate> {
        self.outcome.as_ref().ok()
    }
}

impl PositionEstimate {
    pub fn point(&self) -> Point3 {
        [self.x_m, self.y_m, self.z_m]
    }
}

fn stream(master_seed: u64, a: u64, b: u64, tag: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip([master_seed, a, b, tag]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

pub fn deployment_rng(master_seed: u64, trial_index: usize) -> ChaCha8Rng {
    stream(master_seed, trial_index as u64, 0, STREAM_DEPLOY)
}

pub fn noise_rng(master_seed: u64, snr_index: usize, trial_index: usize) -> ChaCha8Rng {
    stream(
        master_seed,
        snr_index as u64,
        trial_index as u64,
        STREAM_NOISE,
    )
}

/// Plasma sources of one beacon pass, `x_start` to `x_end` inclusive.
pub fn build_track(config: &ScenarioConfig) -> Vec<PlasmaSource> {
    let t = &config.track;
    let steps = ((t.x_end_m - t.x_start_m) / t.spacing_m + 1e-9).floor() as usize;
    (0..=steps)
        .map(|i| PlasmaSource {
            x_m: t.x_start_m + i as f64 * t.spacing_m,
            y_m: t.y_m,
            depth_m: t.depth_m,
            spl_db: config.channel.source_level_db,
        })
        .collect()
}

/// `node_count` positions drawn uniformly from the deployment box.
pub fn deploy_nodes<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Vec<Point3> {
    let v = config.volume;
    (0..config.node_count)
        .map(|_| {
            [
                rng.random::<f64>() * v.x_m,
                rng.random::<f64>() * v.y_m,
                rng.random::<f64>() * v.z_m,
            ]
        })
        .collect()
}

fn distance(a: Point3, s: &PlasmaSource) -> f64 {
    let (dx, dy, dz) = (a[0] - s.x_m, a[1] - s.y_m, a[2] - s.depth_m);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// What a node at `truth` hears from the pass: one averaged observation per
/// source with at least one detected block.
pub fn observe_node<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    track: &[PlasmaSource],
    truth: Point3,
    snr_db: f64,
    rng: &mut R,
) -> Vec<NodeObservation> {
    let channel = &config.channel;
    let mut observations = Vec::with_capacity(track.len());
    let mut blocks = Vec::with_capacity(config.track.blocks_per_source);
    for source in track {
        let Ok(sil) = channel.level_at(distance(truth, source)) else {
            continue;
        };
        blocks.clear();
        blocks.extend(
            (0..config.track.blocks_per_source)
                .map(|_| apply_awgn(sil, snr_db, channel.detection_threshold_db, rng)),
        );
        let mut side_positive = truth[1] >= source.y_m;
        if config.side_flip_prob > 0.0 && rng.random::<f64>() < config.side_flip_prob {
            side_positive = !side_positive;
        }
        if let Ok(mean_sil_db) = average_sil(&blocks) {
            observations.push(NodeObservation {
                source: *source,
                mean_sil_db,
                side_positive,
            });
        }
    }
    observations
}

/// Forward-simulates and localizes each node in `truths` at one SNR.
pub fn localize_nodes<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    truths: &[Point3],
    snr_db: f64,
    rng: &mut R,
) -> Vec<NodeResult> {
    let track = build_track(config);
    let min_baseline = config.min_baseline();
    truths
        .iter()
        .map(|&truth| {
            let observations = observe_node(config, &track, truth, snr_db, rng);
            let mut depth = truth[2];
            if config.depth_sensor_std_m > 0.0 {
                let z: f64 = rng.sample(StandardNormal);
                depth += config.depth_sensor_std_m * z;
            }
            let outcome = localize_node(&observations, depth, &config.channel, min_baseline);
            NodeResult { truth, outcome }
        })
        .collect()
}

/// One Monte Carlo trial at grid point `snr_index`.
pub fn run_trial(
    config: &ScenarioConfig,
    snr_index: usize,
    trial_index: usize,
) -> Result<Vec<NodeResult>> {
    let snr_db = *config.snr_grid_db.get(snr_index).ok_or_else(|| {
        Error::Domain(format!(
            "snr index {snr_index} outside a grid of {}",
            config.snr_grid_db.len()
        ))
    })?;
    let truths = deploy_nodes(config, &mut deployment_rng(config.master_seed, trial_index));
    let mut rng = noise_rng(config.master_seed, snr_index, trial_index);
    Ok(localize_nodes(config, &truths, snr_db, &mut rng))
}

/// Root mean square 3D position error.
pub fn rmse(truths: &[Point3], estimates: &[Point3]) -> Result<f64> {
    if truths.is_empty() {
        return Err(Error::UndefinedMetric("rmse of an empty set".to_string()));
    }
    if truths.len() != estimates.len() {
        return Err(Error::UndefinedMetric(format!(
            "{} true positions but {} estimates",
            truths.len(),
            estimates.len()
        )));
    }
    let sum: f64 = truths
        .iter()
        .zip(estimates)
        .map(|(t, e)| (0..3).map(|i| (t[i] - e[i]).powi(2)).sum::<f64>())
        .sum();
    Ok((sum / truths.len() as f64).sqrt())
}

pub fn sweep_snr(config: &ScenarioConfig) -> Result<RmseReport> {
    sweep_snr_with(config, Execution::default())
}

pub fn sweep_snr_with(config: &ScenarioConfig, execution: Execution) -> Result<RmseReport> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> = (0..config.snr_grid_db.len())
        .flat_map(|s| (0..config.trials).map(move |t| (s, t)))
        .collect();
    let run = |&(s, t): &(usize, usize)| run_trial(config, s, t);
    let results: Vec<Vec<NodeResult>> = match execution {
        Execution::Serial => tasks.iter().map(run).collect::<Result<_>>()?,
        Execution::Parallel => tasks.par_iter().map(run).collect::<Result<_>>()?,
    };

    let rows = config
        .snr_grid_db
        .iter()
        .zip(results.chunks(config.trials))
        .map(|(&snr_db, trials)| summarize(snr_db, trials))
        .collect();
    Ok(RmseReport {
        rows,
        config_echo: config.clone(),
    })
}

fn summarize(snr_db: f64, trials: &[Vec<NodeResult>]) -> RmseRow {
    let mut attempted = 0usize;
    let mut localized = 0usize;
    let mut degenerate = 0usize;
    let mut abs_x_error = 0.0;
    let mut rmse_sum = 0.0;
    let mut rmse_trials = 0usize;
    for trial in trials {
        attempted += trial.len();
        let (truths, estimates): (Vec<Point3>, Vec<Point3>) = trial
            .iter()
            .filter_map(|r| r.estimate().map(|e| (r.truth, e.point())))
            .unzip();
        for r in trial {
            if let Some(e) = r.estimate() {
                localized += 1;
                degenerate += usize::from(e.degenerate);
                abs_x_error += (e.x_m - r.truth[0]).abs();
            }
        }
        if let Ok(v) = rmse(&truths, &estimates) {
            rmse_sum += v;
            rmse_trials += 1;
        }
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            f64::NAN
        } else {
            num as f64 / den as f64
        }
    };
    RmseRow {
        snr_db,
        rmse_m: if rmse_trials == 0 {
            f64::NAN
        } else {
            rmse_sum / rmse_trials as f64
        },
        localized_fraction: ratio(localized, attempted),
        degenerate_fraction: ratio(degenerate, localized),
        mean_abs_x_error_m: if localized == 0 {
            f64::NAN
        } else {
            abs_x_error / localized as f64
        },
    }
}
