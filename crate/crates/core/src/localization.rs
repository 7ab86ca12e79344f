//! Node-side position fix from a pair of equivalent plasma sources.
//!
//! The beacon lays sources along a line parallel to the x axis at constant
//! `y` and depth. A node that receives the same pressure from two of them is
//! equidistant from both, so its x coordinate is the pair midpoint. The range
//! to the pair, minus the known vertical offset, gives the horizontal distance
//! `d`, and the offset from the track line follows from the half baseline.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, ReceivedLevel};
use crate::error::{ensure_finite, Error, Result};
use crate::ranging::invert_tl;

/// Two candidate pairs whose equidistance offsets differ by less than this
/// are considered tied. Covers round-off of the per-source range inversion.
pub const PAIR_TIE_TOLERANCE_M: f64 = 1e-6;

/// Sources on one track must agree on `y` and depth to this precision.
const TRACK_TOLERANCE_M: f64 = 1e-9;

/// One laser-induced acoustic source and the level it declares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmaSource {
    pub x_m: f64,
    pub y_m: f64,
    /// Positive downward from the surface.
    pub depth_m: f64,
    /// Declared source level, dB re 1 µPa at 1 m.
    pub spl_db: f64,
}

impl PlasmaSource {
    pub fn transmission_loss_db(&self, sil_db: f64) -> f64 {
        self.spl_db - sil_db
    }
}

/// A source as heard by a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeObservation {
    pub source: PlasmaSource,
    /// Mean measured level over the source's detected blocks.
    pub mean_sil_db: f64,
    /// Directional receiver bit: the node is on the `+y` side of the track.
    pub side_positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionEstimate {
    pub x_m: f64,
    pub y_m: f64,
    /// Sensed depth, passed through untouched.
    pub z_m: f64,
    /// Set whenever a negative radicand was clamped to zero.
    pub degenerate: bool,
    /// Indices of the selected sources in the observation list.
    pub pair: (usize, usize),
}

/// Mean measured level of the detected blocks, averaged in dB.
///
/// Undetected blocks in `levels` are skipped.
pub fn average_sil(levels: &[ReceivedLevel]) -> Result<f64> {
    let (sum, n) = levels
        .iter()
        .filter(|l| l.detected)
        .fold((0.0, 0usize), |(s, n), l| (s + l.sil_db, n + 1));
    if n == 0 {
        return Err(Error::NoObservation);
    }
    Ok(sum / n as f64)
}

/// Range implied by one observation on its own.
pub fn observation_range(obs: &NodeObservation, alpha_db_per_km: f64, k: f64) -> Result<f64> {
    invert_tl(
        obs.source.transmission_loss_db(obs.mean_sil_db),
        alpha_db_per_km,
        k,
    )
}

/// Picks the pair of sources the node is most nearly equidistant from.
///
/// Each observation is inverted to a range `R`, and a pair `(i, j)` with
/// baseline `b = |x_i - x_j| >= min_baseline_m` is scored by
/// `|R_i^2 - R_j^2| / 2b`, which is zero exactly when both levels imply the
/// same distance and otherwise equals how far the node sits from the pair's
/// perpendicular bisector. Near-ties go to the louder pair, then to the
/// smaller first index.
pub fn select_equivalent_pair(
    observations: &[NodeObservation],
    alpha_db_per_km: f64,
    k: f64,
    min_baseline_m: f64,
) -> Result<(usize, usize)> {
    if observations.len() < 2 {
        return Err(Error::Unlocalizable(format!(
            "need at least two observed sources, got {}",
            observations.len()
        )));
    }
    if !(min_baseline_m.is_finite() && min_baseline_m > 0.0) {
        return Err(Error::Domain(format!(
            "minimum baseline must be positive, got {min_baseline_m}"
        )));
    }
    let ranges = observations
        .iter()
        .map(|o| observation_range(o, alpha_db_per_km, k))
        .collect::<Result<Vec<_>>>()?;

    // (offset, mean level, i, j)
    let mut best: Option<(f64, f64, usize, usize)> = None;
    for i in 0..observations.len() {
        for j in (i + 1)..observations.len() {
            let baseline = (observations[i].source.x_m - observations[j].source.x_m).abs();
            if baseline < min_baseline_m {
                continue;
            }
            let (ri, rj) = (ranges[i], ranges[j]);
            let offset = ((ri - rj) * (ri + rj)).abs() / (2.0 * baseline);
            let level = 0.5 * (observations[i].mean_sil_db + observations[j].mean_sil_db);
            let better = match best {
                None => true,
                Some((b_off, b_level, _, _)) => {
                    offset < b_off - PAIR_TIE_TOLERANCE_M
                        || (offset <= b_off + PAIR_TIE_TOLERANCE_M && level > b_level)
                }
            };
            if better {
                best = Some((offset, level, i, j));
            }
        }
    }
    best.map(|(_, _, i, j)| (i, j)).ok_or_else(|| {
        Error::Unlocalizable(format!(
            "no source pair spans the {min_baseline_m} m minimum baseline"
        ))
    })
}

/// Range to the pair from the mean of the two transmission losses.
pub fn estimate_range(
    a: &NodeObservation,
    b: &NodeObservation,
    alpha_db_per_km: f64,
    k: f64,
) -> Result<f64> {
    let tl_a = a.source.transmission_loss_db(a.mean_sil_db);
    let tl_b = b.source.transmission_loss_db(b.mean_sil_db);
    invert_tl(0.5 * (tl_a + tl_b), alpha_db_per_km, k)
}

/// Midpoint/bisector geometry for an equivalent pair.
///
/// `pair` in the result is `(0, 1)`; [`localize_node`] fills in the real
/// indices.
pub fn estimate_position(
    a: &NodeObservation,
    b: &NodeObservation,
    range_m: f64,
    node_depth_m: f64,
) -> Result<PositionEstimate> {
    let (sa, sb) = (a.source, b.source);
    for (name, v) in [
        ("source x", sa.x_m),
        ("source x", sb.x_m),
        ("source y", sa.y_m),
        ("source y", sb.y_m),
        ("source depth", sa.depth_m),
        ("source depth", sb.depth_m),
        ("range", range_m),
        ("node depth", node_depth_m),
    ] {
        ensure_finite(name, v)?;
    }
    if range_m <= 0.0 {
        return Err(Error::Domain(format!(
            "range must be positive, got {range_m}"
        )));
    }
    if (sa.y_m - sb.y_m).abs() > TRACK_TOLERANCE_M
        || (sa.depth_m - sb.depth_m).abs() > TRACK_TOLERANCE_M
    {
        return Err(Error::Domain(
            "pair sources are not on one track".to_string(),
        ));
    }

    let mut degenerate = false;
    let x = 0.5 * (sa.x_m + sb.x_m);

    let dz = node_depth_m - sa.depth_m;
    let d_sq = range_m * range_m - dz * dz;
    let d = if d_sq < 0.0 {
        degenerate = true;
        0.0
    } else {
        d_sq.sqrt()
    };

    let baseline = sa.x_m - sb.x_m;
    let radicand = (2.0 * d) * (2.0 * d) - baseline * baseline;
    let half_chord = if radicand < 0.0 {
        degenerate = true;
        0.0
    } else {
        0.5 * radicand.sqrt()
    };
    let y = if a.side_positive {
        sa.y_m + half_chord
    } else {
        sa.y_m - half_chord
    };

    Ok(PositionEstimate {
        x_m: x,
        y_m: y,
        z_m: node_depth_m,
        degenerate,
        pair: (0, 1),
    })
}

/// Full node pipeline: pair selection, range inversion, geometry.
pub fn localize_node(
    observations: &[NodeObservation],
    node_depth_m: f64,
    channel: &ChannelParams,
    min_baseline_m: f64,
) -> Result<PositionEstimate> {
    let alpha = channel.absorption_db_per_km()?;
    let k = channel.spreading_factor;
    let (i, j) = select_equivalent_pair(observations, alpha, k, min_baseline_m)?;
    let (a, b) = (&observations[i], &observations[j]);
    let range = estimate_range(a, b, alpha, k)?;
    let estimate = estimate_position(a, b, range, node_depth_m)?;
    Ok(PositionEstimate {
        pair: (i, j),
        ..estimate
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(x: f64) -> PlasmaSource {
        PlasmaSource {
            x_m: x,
            y_m: 0.0,
            depth_m: 1.0,
            spl_db: 210.0,
        }
    }

    fn obs(x: f64, sil: f64) -> NodeObservation {
        NodeObservation {
            source: src(x),
            mean_sil_db: sil,
            side_positive: true,
        }
    }

    fn lvl(sil_db: f64) -> ReceivedLevel {
        ReceivedLevel {
            sil_db,
            detected: true,
        }
    }

    #[test]
    fn average_examples() {
        assert_eq!(average_sil(&[lvl(150.0)]).unwrap(), 150.0);
        assert_eq!(average_sil(&[lvl(149.0), lvl(151.0)]).unwrap(), 150.0);
        let five = [lvl(148.81297); 5];
        assert!((average_sil(&five).unwrap() - 148.81297).abs() < 1e-12);
        assert_eq!(average_sil(&[]), Err(Error::NoObservation));
    }

    #[test]
    fn average_skips_undetected() {
        let levels = [
            lvl(150.0),
            ReceivedLevel {
                sil_db: 10.0,
                detected: false,
            },
        ];
        assert_eq!(average_sil(&levels).unwrap(), 150.0);
        let none = [ReceivedLevel {
            sil_db: 10.0,
            detected: false,
        }];
        assert_eq!(average_sil(&none), Err(Error::NoObservation));
    }

    #[test]
    fn exact_equality_wins() {
        let observations: Vec<_> = [
            (20.0, 140.0),
            (30.0, 142.0),
            (40.0, 145.0),
            (50.0, 145.0),
            (60.0, 143.5),
        ]
        .into_iter()
        .map(|(x, s)| obs(x, s))
        .collect();
        assert_eq!(
            select_equivalent_pair(&observations, 1.0, 2.0, 10.0).unwrap(),
            (2, 3)
        );
    }

    #[test]
    fn baseline_constraint() {
        let observations = [obs(0.0, 150.0), obs(5.0, 150.0), obs(30.0, 140.0)];
        let (i, j) = select_equivalent_pair(&observations, 1.0, 2.0, 10.0).unwrap();
        assert!((observations[i].source.x_m - observations[j].source.x_m).abs() >= 10.0);
        assert!(matches!(
            select_equivalent_pair(&observations[..2], 1.0, 2.0, 10.0),
            Err(Error::Unlocalizable(_))
        ));
    }

    #[test]
    fn single_or_no_observation_is_unlocalizable() {
        assert!(matches!(
            select_equivalent_pair(&[obs(0.0, 150.0)], 1.0, 2.0, 10.0),
            Err(Error::Unlocalizable(_))
        ));
        let ch = ChannelParams::default();
        assert!(matches!(
            localize_node(&[], 200.0, &ch, 10.0),
            Err(Error::Unlocalizable(_))
        ));
    }

    #[test]
    fn tie_goes_to_louder_pair() {
        // Node at x = 45: (40, 50) and (30, 60) are both exactly equidistant.
        let observations = [
            obs(30.0, 145.0),
            obs(40.0, 150.0),
            obs(50.0, 150.0),
            obs(60.0, 145.0),
        ];
        assert_eq!(
            select_equivalent_pair(&observations, 1.0, 2.0, 10.0).unwrap(),
            (1, 2)
        );
    }

    #[test]
    fn range_examples() {
        let a = obs(0.0, 148.81297);
        let r = estimate_range(&a, &a, 1.18703, 2.0).unwrap();
        assert!((r - 1000.0).abs() < 1e-8);
        let b = obs(0.0, 210.0);
        assert!((estimate_range(&b, &b, 0.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        // TL 62 and 61 average to 61.5; bisection of the loss law gives 1032.1448603884843.
        let r = estimate_range(&obs(0.0, 148.0), &obs(10.0, 149.0), 1.18703, 2.0).unwrap();
        assert!((r / 1_032.144_860_388_484_3 - 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn geometry_forward_case() {
        let r = 43001f64.sqrt();
        let est = estimate_position(&obs(0.0, 0.0), &obs(100.0, 0.0), r, 200.0).unwrap();
        assert!(!est.degenerate);
        assert!((est.x_m - 50.0).abs() < 1e-9);
        assert!((est.y_m - 30.0).abs() < 1e-9);
        assert_eq!(est.z_m, 200.0);
    }

    #[test]
    fn geometry_collinear_boundary() {
        let est = estimate_position(&obs(0.0, 0.0), &obs(60.0, 0.0), 30.0, 1.0).unwrap();
        assert_eq!(
            (est.x_m, est.y_m, est.z_m, est.degenerate),
            (30.0, 0.0, 1.0, false)
        );
    }

    #[test]
    fn geometry_degenerate_range() {
        let est = estimate_position(&obs(0.0, 0.0), &obs(100.0, 0.0), 100.0, 500.0).unwrap();
        assert!(est.degenerate);
        assert_eq!((est.x_m, est.y_m), (50.0, 0.0));
        // Horizontal distance too short for the baseline.
        let est = estimate_position(&obs(0.0, 0.0), &obs(100.0, 0.0), 40.0, 1.0).unwrap();
        assert!(est.degenerate);
    }

    #[test]
    fn geometry_negative_side() {
        let mut a = obs(0.0, 0.0);
        a.side_positive = false;
        let est = estimate_position(&a, &obs(100.0, 0.0), 43001f64.sqrt(), 200.0).unwrap();
        assert!((est.y_m + 30.0).abs() < 1e-9);
    }

    #[test]
    fn geometry_rejects_bad_input() {
        let (a, b) = (obs(0.0, 0.0), obs(100.0, 0.0));
        assert!(estimate_position(&a, &b, f64::NAN, 1.0).is_err());
        assert!(estimate_position(&a, &b, 10.0, f64::INFINITY).is_err());
        assert!(estimate_position(&a, &b, 0.0, 1.0).is_err());
        let mut off = b;
        off.source.depth_m = 5.0;
        assert!(estimate_position(&a, &off, 100.0, 1.0).is_err());
    }
}
