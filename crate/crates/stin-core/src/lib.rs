//! Monte Carlo models for downlink multi-connectivity in satellite-terrestrial
//! integrated networks.
//!
//! The crate is organized around one snapshot "world" per trial:
//!
//! - [`geometry`] samples satellite shells and the terrestrial region and
//!   answers visibility/distance queries on the spherical Earth model.
//! - [`channel`] turns distances into link budgets: pathloss, sectored
//!   antenna gains, Nakagami-m fading, received power.
//! - [`connectivity`] schedules serving/interfering sets for the
//!   single- and multi-connectivity association schemes and computes SINR.
//! - [`estimation`] models pilot assignment, contaminated least-squares
//!   channel estimates, and the CDF-discrepancy metric.
//! - [`sync`] computes propagation delays, timing advances, and residual
//!   misalignment against a cyclic-prefix budget.
//! - [`engine`] drives seeded, trial-parallel Monte Carlo runs and the
//!   experiment presets, producing coverage and discrepancy curves.
//! - [`stats`] holds the small shared statistics toolbox (empirical CDF
//!   distances, binomial confidence intervals).

pub mod channel;
pub mod connectivity;
pub mod engine;
pub mod estimation;
pub mod geometry;
pub mod stats;
pub mod sync;

/// Speed of light, km/s.
pub const SPEED_OF_LIGHT_KM_PER_S: f64 = 299_792.458;
