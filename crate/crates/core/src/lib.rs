//! Localization of underwater sensor nodes from laser-induced (optoacoustic)
//! plasma sources.
//!
//! An airborne beacon focuses a laser below the surface at regular steps along
//! a straight track. Every plasma acts as an isotropic acoustic point source and
//! broadcasts a block carrying its coordinates and source level. A node that
//! hears two sources at the same level sits on their perpendicular bisector,
//! so combining the pair midpoint, an RSS range and its own pressure-sensor
//! depth gives a 3D fix.
//!
//! The crate is split by stage:
//!
//! * [`channel`]: Thorp absorption, transmission loss, received level, AWGN.
//! * [`ranging`]: Lambert W (Halley) inversion of transmission loss to range.
//! * [`localization`]: pair selection and the midpoint/bisector geometry.
//! * [`simulation`]: seeded Monte Carlo deployment, SNR sweeps and RMSE.
//! * [`config`] and [`report`]: flat `key = value` scenarios, CSV/JSON output.

pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod localization;
pub mod ranging;
pub mod report;
pub mod simulation;

pub use channel::{ChannelParams, ReceivedLevel};
pub use config::ScenarioConfig;
pub use error::{Error, Result};
pub use localization::{NodeObservation, PlasmaSource, PositionEstimate};
pub use ranging::InversionSettings;
pub use report::RmseReport;
