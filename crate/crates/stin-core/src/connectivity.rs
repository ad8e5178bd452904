//! Association and scheduling: serving-set selection for single- and
//! multi-connectivity, the four scheduling modes, link availability, and
//! SINR under joint or selection combining.

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectivityError {
    #[error("noise power must be positive, got {0} mW")]
    NonpositiveNoise(f64),
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}

/// Scheduling state of a UE for one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Served by both a satellite and a base station.
    Mode1,
    /// Served by a satellite only.
    Mode2,
    /// Served by a base station only.
    Mode3,
    /// Unserved.
    Mode4,
}

/// Total truth table over (satellite available, base station available).
pub fn determine_mode(sat_ok: bool, bs_ok: bool) -> Mode {
    match (sat_ok, bs_ok) {
        (true, true) => Mode::Mode1,
        (true, false) => Mode::Mode2,
        (false, true) => Mode::Mode3,
        (false, false) => Mode::Mode4,
    }
}

/// Availability model: independent blockage coins per domain plus a mean
/// received-power floor for the base-station link.
#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityModel {
    pub sat_blockage_prob: f64,
    pub bs_blockage_prob: f64,
    pub bs_min_power_dbm: f64,
}

impl AvailabilityModel {
    pub fn validate(&self) -> Result<(), ConnectivityError> {
        for (field, p) in [
            ("sat_blockage_prob", self.sat_blockage_prob),
            ("bs_blockage_prob", self.bs_blockage_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConnectivityError::InvalidConfig {
                    field,
                    reason: format!("must be in [0, 1], got {p}"),
                });
            }
        }
        if self.bs_min_power_dbm.is_nan() {
            return Err(ConnectivityError::InvalidConfig {
                field: "bs_min_power_dbm",
                reason: "must not be NaN".into(),
            });
        }
        Ok(())
    }
}

/// A link is available unless its blockage coin fires or its mean received
/// power (fading excluded) falls below the threshold.
pub fn link_available<R: Rng>(
    mean_power_dbm: f64,
    min_power_dbm: f64,
    blockage_prob: f64,
    rng: &mut R,
) -> bool {
    let blocked = rng.random::<f64>() < blockage_prob;
    !blocked && mean_power_dbm >= min_power_dbm
}

/// Candidate transmitter: canonical index plus distance to the UE, km.
pub type Candidate = (usize, f64);

/// Nearest candidate; ties break toward the lowest index. `None` signals
/// "no transmitter available" and drives Mode 3/4.
pub fn select_serving_satellite(candidates: &[Candidate]) -> Option<usize> {
    candidates
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(index, _)| index)
}

/// The `min(k, n)` nearest candidates under the same tie rule, ordered
/// nearest-first. Output is independent of the input ordering.
pub fn select_cluster(candidates: &[Candidate], k: usize) -> Vec<usize> {
    let mut sorted: Vec<Candidate> = candidates.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    sorted.truncate(k);
    sorted.into_iter().map(|(index, _)| index).collect()
}

/// How serving links combine at the UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combining {
    /// Non-coherent joint transmission: serving powers add.
    Joint,
    /// Best single serving link against the shared interference.
    Selection,
}

/// SINR for a serving set against an interference set. An empty serving set
/// yields 0 (no useful signal).
pub fn compute_sinr(
    serving_mw: &[f64],
    interfering_mw: &[f64],
    noise_mw: f64,
    combining: Combining,
) -> Result<f64, ConnectivityError> {
    if noise_mw <= 0.0 || noise_mw.is_nan() {
        return Err(ConnectivityError::NonpositiveNoise(noise_mw));
    }
    let denominator = interfering_mw.iter().sum::<f64>() + noise_mw;
    let sinr = match combining {
        Combining::Joint => serving_mw.iter().sum::<f64>() / denominator,
        Combining::Selection => {
            serving_mw.iter().copied().fold(0.0f64, f64::max) / denominator
        }
    };
    Ok(sinr)
}

/// Covered iff the linear SINR meets the dB threshold (boundary inclusive).
pub fn coverage_indicator(sinr_linear: f64, threshold_db: f64) -> bool {
    sinr_linear >= 10f64.powf(threshold_db / 10.0)
}

/// Resolved association for one snapshot: serving and interfering sets
/// partition the visible satellites and the in-region base stations.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityDecision {
    pub mode: Mode,
    pub serving_sats: Vec<usize>,
    pub serving_bss: Vec<usize>,
    pub interferer_sats: Vec<usize>,
    pub interferer_bss: Vec<usize>,
}

/// Build the serving/interfering partition for a (K, L) association.
/// `sat_candidates` are the visible satellites; `bs_in_range` the base
/// stations within the service radius; `bs_all` every in-region base
/// station. K = L = 1 is the SS-SBS setup, L = 0 the satellite-only one.
pub fn build_decision(
    sat_candidates: &[Candidate],
    bs_in_range: &[Candidate],
    bs_all: &[Candidate],
    serving_sat_count: usize,
    serving_bs_count: usize,
    sat_ok: bool,
    bs_ok: bool,
) -> ConnectivityDecision {
    let serving_sats = if sat_ok {
        select_cluster(sat_candidates, serving_sat_count)
    } else {
        Vec::new()
    };
    let serving_bss = if bs_ok {
        select_cluster(bs_in_range, serving_bs_count)
    } else {
        Vec::new()
    };
    let interferer_sats = sat_candidates
        .iter()
        .map(|&(i, _)| i)
        .filter(|i| !serving_sats.contains(i))
        .collect();
    let interferer_bss = bs_all
        .iter()
        .map(|&(i, _)| i)
        .filter(|i| !serving_bss.contains(i))
        .collect();
    ConnectivityDecision {
        mode: determine_mode(!serving_sats.is_empty(), !serving_bss.is_empty()),
        serving_sats,
        serving_bss,
        interferer_sats,
        interferer_bss,
    }
}
