//! One Monte Carlo trial: sample a world snapshot, draw fading once, and
//! evaluate every connectivity scheme on the same draws (paired design).

use crate::channel::{db_to_linear, dbm_to_mw, mw_to_dbm, sample_fading};
use crate::connectivity::{build_decision, compute_sinr, select_serving_satellite, Candidate, Mode};
use crate::engine::config::ExperimentConfig;
use crate::geometry::{
    elevation_angle_deg, sample_constellation, sample_region, slant_range_km, surface_point,
    Constellation, PlanarPoint, Position3D, RegionSample,
};
use crate::sync::{msmbs_alignment, propagation_delay_us};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream namespaces so the coverage, beamforming, and estimation runs
/// consume disjoint ChaCha streams of the same master seed.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StreamDomain {
    Coverage = 1,
    Beamforming = 2,
    Estimation = 3,
}

/// Per-task generator: same master seed, one counter-derived stream per
/// (domain, index), so parallel and serial execution draw identically.
pub(crate) fn task_rng(master_seed: u64, domain: StreamDomain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((domain as u64) << 56) | index);
    rng
}

/// One sampled network snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub constellation: Constellation,
    pub region: RegionSample,
    pub earth_radius_km: f64,
}

impl World {
    pub fn typical_ue_planar(&self) -> PlanarPoint {
        self.region.typical_position()
    }

    pub fn typical_ue_surface(&self) -> Position3D {
        surface_point(&self.typical_ue_planar(), self.earth_radius_km)
    }
}

/// Sample constellation and region for one trial.
pub fn sample_world<R: Rng>(config: &ExperimentConfig, rng: &mut R) -> World {
    World {
        constellation: sample_constellation(&config.shells, rng),
        region: sample_region(&config.region, rng),
        earth_radius_km: config.shells[0].earth_radius_km,
    }
}

/// Randomness consumed by one trial beyond the world itself. Shared across
/// all schemes of the trial so their comparison is paired draw-for-draw.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraws {
    /// Power fading per visible satellite, in candidate order.
    pub sat_fading: Vec<f64>,
    /// Power fading per in-region base station, in index order.
    pub bs_fading: Vec<f64>,
    pub sat_blocked: bool,
    pub bs_blocked: bool,
}

/// A visible satellite with its link geometry. Candidates keep the
/// flattened-constellation order, so positions in this list are the
/// canonical tie-breaking indices.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SatCandidate {
    pub slant_km: f64,
    pub elevation_deg: f64,
}

/// Visible satellites in flattened-index order, honoring each shell's own
/// elevation threshold.
pub(crate) fn satellite_candidates(world: &World, ue: &Position3D) -> Vec<SatCandidate> {
    let mut out = Vec::new();
    for (shell, positions) in &world.constellation.shells {
        for sat in positions {
            let elevation = elevation_angle_deg(ue, sat);
            if elevation >= shell.min_elevation_deg {
                out.push(SatCandidate {
                    slant_km: slant_range_km(ue, sat),
                    elevation_deg: elevation,
                });
            }
        }
    }
    out
}

/// Outcome of one trial under the paired design: every scheme evaluated on
/// the same world and fading draws.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// SS-SBS multi-connectivity (Mode 1 when both domains are available).
    pub sinr_mc: f64,
    /// Nearest-visible-satellite baseline.
    pub sinr_sc_sat: f64,
    /// Nearest-in-range-base-station baseline.
    pub sinr_sc_bs: f64,
    pub mode: Mode,
    pub serving_sats: usize,
    pub serving_bss: usize,
    /// Largest post-compensation arrival residual across the serving set, us.
    pub sync_residual_us: f64,
}

/// Deterministic trial: the (master seed, trial index) pair fully determines
/// the world, the draws, and hence the result.
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> TrialResult {
    let mut rng = task_rng(config.master_seed, StreamDomain::Coverage, trial_index);
    let world = sample_world(config, &mut rng);
    run_trial_in_world(config, &world, &mut rng)
}

/// Evaluate a trial on an existing world, drawing fading and blockage coins
/// from `rng`.
pub fn run_trial_in_world<R: Rng>(
    config: &ExperimentConfig,
    world: &World,
    rng: &mut R,
) -> TrialResult {
    let ue = world.typical_ue_surface();
    let candidates = satellite_candidates(world, &ue);

    let sat_blocked = rng.random::<f64>() < config.availability.sat_blockage_prob;
    let bs_blocked = rng.random::<f64>() < config.availability.bs_blockage_prob;
    let sat_fading: Vec<f64> = candidates
        .iter()
        .map(|_| sample_fading(config.ntn_link.nakagami_m, rng).expect("validated m").power_gain)
        .collect();
    let bs_fading: Vec<f64> = world
        .region
        .bs_positions
        .iter()
        .map(|_| sample_fading(config.tn_link.nakagami_m, rng).expect("validated m").power_gain)
        .collect();

    evaluate_trial(config, world, &TrialDraws { sat_fading, bs_fading, sat_blocked, bs_blocked })
}

/// Pure evaluation of one trial given all random draws. Exposed so tests can
/// pin fading and check budgets by hand.
pub fn evaluate_trial(config: &ExperimentConfig, world: &World, draws: &TrialDraws) -> TrialResult {
    let ue = world.typical_ue_surface();
    let ue_planar = world.typical_ue_planar();
    let candidates = satellite_candidates(world, &ue);
    assert_eq!(draws.sat_fading.len(), candidates.len(), "one fading draw per visible satellite");
    assert_eq!(
        draws.bs_fading.len(),
        world.region.bs_positions.len(),
        "one fading draw per base station"
    );

    let ntn_pathloss = config.ntn_link.pathloss_model();
    let tn_pathloss = config.tn_link.pathloss_model();
    let ntn_rx = db_to_linear(config.ntn_link.rx_gain_dbi);
    let tn_rx = db_to_linear(config.tn_link.rx_gain_dbi);
    let ntn_tx_mw = dbm_to_mw(config.ntn_link.tx_power_dbm);
    let tn_tx_mw = dbm_to_mw(config.tn_link.tx_power_dbm);
    let ntn_mainlobe = db_to_linear(config.ntn_link.mainlobe_gain_dbi);
    let ntn_sidelobe = db_to_linear(config.ntn_link.sidelobe_gain_dbi);
    let tn_mainlobe = db_to_linear(config.tn_link.mainlobe_gain_dbi);
    let tn_sidelobe = db_to_linear(config.tn_link.sidelobe_gain_dbi);

    // Role-independent budget per transmitter; the serving/interfering tx
    // gain multiplies on top, so schemes share identical draws.
    let sat_base: Vec<f64> = candidates
        .iter()
        .zip(&draws.sat_fading)
        .map(|(c, f)| {
            ntn_tx_mw
                * ntn_pathloss
                    .gain(c.slant_km, config.ntn_link.pathloss_exponent)
                    .expect("slant ranges exceed the NTN reference distance")
                * ntn_rx
                * f
        })
        .collect();
    // Terrestrial distances below the pathloss reference are clamped to it
    // (close-in bound; the power-law model is not defined nearer).
    let bs_distances: Vec<f64> = world
        .region
        .bs_positions
        .iter()
        .map(|bs| ue_planar.distance_km(bs))
        .collect();
    let bs_base: Vec<f64> = bs_distances
        .iter()
        .zip(&draws.bs_fading)
        .map(|(&d, f)| {
            let d_eff = d.max(config.tn_link.reference_distance_km);
            tn_tx_mw
                * tn_pathloss
                    .gain(d_eff, config.tn_link.pathloss_exponent)
                    .expect("distance clamped to reference")
                * tn_rx
                * f
        })
        .collect();

    // Candidate lists for selection: satellites keyed by local candidate
    // index (same order as global), base stations by region index.
    let sat_pairs: Vec<Candidate> =
        candidates.iter().enumerate().map(|(i, c)| (i, c.slant_km)).collect();
    let bs_all: Vec<Candidate> = bs_distances.iter().copied().enumerate().collect();
    let bs_in_range: Vec<Candidate> = bs_all
        .iter()
        .copied()
        .filter(|&(_, d)| d <= config.region.bs_service_radius_km)
        .collect();

    let sat_ok = !candidates.is_empty() && !draws.sat_blocked;
    let bs_ok = match select_serving_satellite(&bs_in_range) {
        Some(j) if !draws.bs_blocked => {
            let d_eff = bs_distances[j].max(config.tn_link.reference_distance_km);
            let mean_mw = tn_tx_mw
                * tn_pathloss.gain(d_eff, config.tn_link.pathloss_exponent).unwrap()
                * tn_rx
                * tn_mainlobe;
            mw_to_dbm(mean_mw) >= config.availability.bs_min_power_dbm
        }
        _ => false,
    };

    let interference_eligible = |i: usize| match config.interference_min_elevation_deg {
        Some(cap) => candidates[i].elevation_deg >= cap,
        None => true,
    };
    let noise_mw = config.noise.noise_mw();
    let sinr_for = |serving_sats: &[usize], serving_bss: &[usize]| -> f64 {
        let mut serving = Vec::with_capacity(serving_sats.len() + serving_bss.len());
        serving.extend(serving_sats.iter().map(|&i| sat_base[i] * ntn_mainlobe));
        serving.extend(serving_bss.iter().map(|&j| bs_base[j] * tn_mainlobe));
        let mut interference = Vec::new();
        interference.extend(
            (0..sat_base.len())
                .filter(|i| !serving_sats.contains(i) && interference_eligible(*i))
                .map(|i| sat_base[i] * ntn_sidelobe),
        );
        interference.extend(
            (0..bs_base.len())
                .filter(|j| !serving_bss.contains(j))
                .map(|j| bs_base[j] * tn_sidelobe),
        );
        compute_sinr(&serving, &interference, noise_mw, config.combining)
            .expect("noise validated positive")
    };

    let decision = build_decision(
        &sat_pairs,
        &bs_in_range,
        &bs_all,
        config.serving_satellites,
        config.serving_bss,
        sat_ok,
        bs_ok,
    );
    let sc_sat_serving: Vec<usize> =
        if sat_ok { select_serving_satellite(&sat_pairs).into_iter().collect() } else { Vec::new() };
    let sc_bs_serving: Vec<usize> =
        if bs_ok { select_serving_satellite(&bs_in_range).into_iter().collect() } else { Vec::new() };

    let sinr_mc = sinr_for(&decision.serving_sats, &decision.serving_bss);
    let sinr_sc_sat = sinr_for(&sc_sat_serving, &[]);
    let sinr_sc_bs = sinr_for(&[], &sc_bs_serving);

    let sat_delays: Vec<f64> = decision
        .serving_sats
        .iter()
        .map(|&i| propagation_delay_us(candidates[i].slant_km))
        .collect();
    let bs_delays: Vec<f64> = decision
        .serving_bss
        .iter()
        .map(|&j| propagation_delay_us(bs_distances[j]))
        .collect();
    let sync_residual_us = if sat_delays.is_empty() && bs_delays.is_empty() {
        0.0
    } else {
        msmbs_alignment(&sat_delays, &bs_delays, &config.sync)
            .expect("non-empty delays")
            .max_residual_us
    };

    TrialResult {
        sinr_mc,
        sinr_sc_sat,
        sinr_sc_bs,
        mode: decision.mode,
        serving_sats: decision.serving_sats.len(),
        serving_bss: decision.serving_bss.len(),
        sync_residual_us,
    }
}
