//! Pilot-based channel estimation with contamination.
//!
//! UEs are assigned pilot sequences; a least-squares estimate of a UE's
//! channel then picks up the superposition of every co-pilot UE's channel
//! plus pilot noise. The quality metric is the two-sample
//! Kolmogorov-Smirnov distance between the received-signal CDFs under the
//! ideal and the estimated channel.

use crate::stats;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

pub type ChannelVector = Vec<Complex64>;

#[derive(Debug, Error)]
pub enum EstimationError {
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("channel dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty sample set passed to cdf_discrepancy")]
    EmptySamples,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> EstimationError {
    EstimationError::InvalidConfig { field, reason: reason.into() }
}

/// Pilot dimensioning for the estimation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotConfig {
    pub num_pilots: usize,
    pub pilot_snr_db: f64,
    pub num_ues: usize,
    pub antennas: usize,
}

impl PilotConfig {
    pub fn validate(&self) -> Result<(), EstimationError> {
        if self.num_pilots == 0 {
            return Err(invalid("count", "must be >= 1"));
        }
        if self.num_ues == 0 {
            return Err(invalid("num_ues", "must be >= 1"));
        }
        if self.antennas == 0 {
            return Err(invalid("antennas", "must be >= 1"));
        }
        if self.pilot_snr_db.is_nan() {
            return Err(invalid("snr_db", "must not be NaN"));
        }
        Ok(())
    }
}

/// Assign a pilot to each UE. With at least as many pilots as UEs the
/// assignment is injective (fully orthogonal); otherwise pilots are drawn
/// uniformly and collisions become possible.
pub fn assign_pilots<R: Rng>(num_ues: usize, num_pilots: usize, rng: &mut R) -> Vec<usize> {
    assert!(num_ues >= 1 && num_pilots >= 1, "counts must be >= 1");
    if num_pilots >= num_ues {
        (0..num_ues).collect()
    } else {
        (0..num_ues).map(|_| rng.random_range(0..num_pilots)).collect()
    }
}

/// Draw an i.i.d. complex Gaussian channel vector with per-antenna power
/// `power_scale` (unit variance per antenna when `power_scale` is 1).
pub fn sample_channel_vector<R: Rng>(antennas: usize, power_scale: f64, rng: &mut R) -> ChannelVector {
    let sd = (power_scale / 2.0).sqrt();
    (0..antennas)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * sd, im * sd)
        })
        .collect()
}

/// Least-squares channel estimates under pilot contamination: each UE's
/// estimate is the sum of all channels sharing its pilot plus complex
/// Gaussian pilot noise with power `1 / pilot_snr`.
pub fn estimate_channel<R: Rng>(
    true_channels: &[ChannelVector],
    assignment: &[usize],
    pilot_snr_db: f64,
    rng: &mut R,
) -> Result<Vec<ChannelVector>, EstimationError> {
    if true_channels.len() != assignment.len() {
        return Err(EstimationError::DimensionMismatch(format!(
            "{} channels but {} pilot assignments",
            true_channels.len(),
            assignment.len()
        )));
    }
    let Some(antennas) = true_channels.first().map(Vec::len) else {
        return Err(EstimationError::DimensionMismatch("no channels".into()));
    };
    if true_channels.iter().any(|h| h.len() != antennas) {
        return Err(EstimationError::DimensionMismatch(
            "channel vectors differ in antenna count".into(),
        ));
    }

    // Per-pilot superpositions; the LS estimate for UE u is the sum over its
    // pilot group, noise added on top.
    let num_pilots = assignment.iter().copied().max().unwrap_or(0) + 1;
    let mut pilot_sums = vec![vec![Complex64::default(); antennas]; num_pilots];
    for (h, &p) in true_channels.iter().zip(assignment) {
        for (s, &c) in pilot_sums[p].iter_mut().zip(h) {
            *s += c;
        }
    }

    let noise_sd = (db_inv(pilot_snr_db) / 2.0).sqrt();
    let estimates = assignment
        .iter()
        .map(|&p| {
            pilot_sums[p]
                .iter()
                .map(|&s| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    s + Complex64::new(re * noise_sd, im * noise_sd)
                })
                .collect()
        })
        .collect();
    Ok(estimates)
}

/// Noise power for a pilot SNR in dB; infinite SNR gives exactly zero.
fn db_inv(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// Received signal power when a maximum-ratio transmit weight built from
/// `channel_used` is applied over the true channel: `|<h, h_hat>|^2 /
/// ||h_hat||^2`. A zero weight vector carries no signal.
pub fn beamformed_signal_power(channel_true: &[Complex64], channel_used: &[Complex64]) -> f64 {
    assert_eq!(channel_true.len(), channel_used.len(), "matching dimensions required");
    let weight_norm_sq: f64 = channel_used.iter().map(Complex64::norm_sqr).sum();
    if weight_norm_sq == 0.0 {
        return 0.0;
    }
    let inner: Complex64 = channel_true
        .iter()
        .zip(channel_used)
        .map(|(&h, &w)| h * w.conj())
        .sum();
    inner.norm_sqr() / weight_norm_sq
}

/// Two-sample Kolmogorov-Smirnov distance between received-signal sample
/// sets, in [0, 1].
pub fn cdf_discrepancy(samples_a: &[f64], samples_b: &[f64]) -> Result<f64, EstimationError> {
    if samples_a.is_empty() || samples_b.is_empty() {
        return Err(EstimationError::EmptySamples);
    }
    Ok(stats::two_sample_ks(samples_a, samples_b))
}
