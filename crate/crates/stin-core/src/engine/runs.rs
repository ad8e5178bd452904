//! Monte Carlo run drivers: trial-parallel execution with per-trial random
//! streams, coverage aggregation with Wilson intervals, and the fixed-world
//! single-link calibration path.

use crate::channel::{sample_fading, LinkParams, NoiseConfig};
use crate::connectivity::coverage_indicator;
use crate::engine::config::{EngineError, ExperimentConfig, Scenario};
use crate::engine::trial::{
    run_trial, run_trial_in_world, sample_world, satellite_candidates, task_rng, StreamDomain,
    TrialResult, World,
};
use crate::geometry::{Constellation, PlanarPoint, Position3D, RegionSample, ShellConfig, UePlacement};
use crate::stats::wilson_interval;
use rayon::prelude::*;

/// Connectivity scheme evaluated by the paired design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    MultiConnectivity,
    SatelliteOnly,
    BaseStationOnly,
}

impl Scheme {
    pub const ALL: [Scheme; 3] =
        [Scheme::MultiConnectivity, Scheme::SatelliteOnly, Scheme::BaseStationOnly];

    pub fn label(&self) -> &'static str {
        match self {
            Scheme::MultiConnectivity => "mc",
            Scheme::SatelliteOnly => "sc_sat",
            Scheme::BaseStationOnly => "sc_bs",
        }
    }
}

impl TrialResult {
    pub fn sinr(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::MultiConnectivity => self.sinr_mc,
            Scheme::SatelliteOnly => self.sinr_sc_sat,
            Scheme::BaseStationOnly => self.sinr_sc_bs,
        }
    }
}

/// Estimated coverage probability at one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageEstimate {
    pub threshold_db: f64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: u64,
}

/// Fraction of SINR samples meeting each threshold, with 95% Wilson bounds.
pub(crate) fn aggregate_coverage(sinrs: &[f64], thresholds_db: &[f64]) -> Vec<CoverageEstimate> {
    thresholds_db
        .iter()
        .map(|&threshold_db| {
            let covered =
                sinrs.iter().filter(|&&s| coverage_indicator(s, threshold_db)).count() as u64;
            let n = sinrs.len() as u64;
            let (ci_low, ci_high) = wilson_interval(covered, n);
            CoverageEstimate { threshold_db, p_hat: covered as f64 / n as f64, ci_low, ci_high, n }
        })
        .collect()
}

/// Completed connectivity run holding every paired trial.
#[derive(Debug, Clone)]
pub struct ConnectivityRun {
    pub thresholds_db: Vec<f64>,
    pub trials: Vec<TrialResult>,
}

impl ConnectivityRun {
    pub fn coverage_curve(&self, scheme: Scheme) -> Vec<CoverageEstimate> {
        let sinrs: Vec<f64> = self.trials.iter().map(|t| t.sinr(scheme)).collect();
        aggregate_coverage(&sinrs, &self.thresholds_db)
    }
}

/// Run every trial of a connectivity experiment. Trials execute in parallel
/// on independent streams and are gathered by index, so the result is
/// bit-identical to a serial run.
pub fn run_connectivity(config: &ExperimentConfig) -> Result<ConnectivityRun, EngineError> {
    config.validate()?;
    let trials: Vec<TrialResult> =
        (0..config.n_trials as u64).into_par_iter().map(|t| run_trial(config, t)).collect();
    Ok(ConnectivityRun { thresholds_db: config.sinr_thresholds_db.clone(), trials })
}

/// Coverage curve for one scheme of a connectivity experiment.
pub fn coverage_curve(
    config: &ExperimentConfig,
    scheme: Scheme,
) -> Result<Vec<CoverageEstimate>, EngineError> {
    Ok(run_connectivity(config)?.coverage_curve(scheme))
}

/// Paired SINR samples for one Nakagami-m value of a beamforming trial. The
/// two values share the world and the fading draw; only the serving-link
/// transmit gain differs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamformingSample {
    pub with_beamforming: f64,
    pub without_beamforming: f64,
}

/// Completed beamforming experiment: `trials[t][k]` is trial t evaluated at
/// `m_grid[k]`.
#[derive(Debug, Clone)]
pub struct BeamformingRun {
    pub m_grid: Vec<f64>,
    pub thresholds_db: Vec<f64>,
    pub trials: Vec<Vec<BeamformingSample>>,
}

impl BeamformingRun {
    pub fn coverage_curve(&self, m_index: usize, beamforming: bool) -> Vec<CoverageEstimate> {
        let sinrs: Vec<f64> = self
            .trials
            .iter()
            .map(|t| {
                let s = &t[m_index];
                if beamforming {
                    s.with_beamforming
                } else {
                    s.without_beamforming
                }
            })
            .collect();
        aggregate_coverage(&sinrs, &self.thresholds_db)
    }
}

/// Satellite-only beamforming experiment over the Nakagami-m grid. The
/// serving satellite is the nearest visible one; all other visible
/// satellites interfere at side-lobe gain either way, so beamforming changes
/// only the serving link's transmit gain.
pub fn run_beamforming(config: &ExperimentConfig) -> Result<BeamformingRun, EngineError> {
    config.validate()?;
    use crate::channel::{db_to_linear, dbm_to_mw};

    let trials: Vec<Vec<BeamformingSample>> = (0..config.n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = task_rng(config.master_seed, StreamDomain::Beamforming, t);
            let world = sample_world(config, &mut rng);
            let ue = world.typical_ue_surface();
            let candidates = satellite_candidates(&world, &ue);

            let pathloss = config.ntn_link.pathloss_model();
            let tx_mw = dbm_to_mw(config.ntn_link.tx_power_dbm);
            let rx = db_to_linear(config.ntn_link.rx_gain_dbi);
            let mainlobe = db_to_linear(config.ntn_link.mainlobe_gain_dbi);
            let sidelobe = db_to_linear(config.ntn_link.sidelobe_gain_dbi);
            let noise_mw = config.noise.noise_mw();

            // Geometry-only budget per candidate; fading redrawn per m.
            let geometry_mw: Vec<f64> = candidates
                .iter()
                .map(|c| {
                    tx_mw
                        * pathloss
                            .gain(c.slant_km, config.ntn_link.pathloss_exponent)
                            .expect("slant ranges exceed the reference distance")
                        * rx
                })
                .collect();
            let serving = candidates
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.slant_km.total_cmp(&b.1.slant_km).then(a.0.cmp(&b.0)))
                .map(|(i, _)| i);
            let interference_eligible = |i: usize| match config.interference_min_elevation_deg {
                Some(cap) => candidates[i].elevation_deg >= cap,
                None => true,
            };

            config
                .nakagami_m_grid
                .iter()
                .map(|&m| {
                    let fading: Vec<f64> = candidates
                        .iter()
                        .map(|_| sample_fading(m, &mut rng).expect("validated m grid").power_gain)
                        .collect();
                    match serving {
                        None => BeamformingSample { with_beamforming: 0.0, without_beamforming: 0.0 },
                        Some(s) => {
                            let interference: f64 = (0..geometry_mw.len())
                                .filter(|&i| i != s && interference_eligible(i))
                                .map(|i| geometry_mw[i] * fading[i] * sidelobe)
                                .sum();
                            let denominator = interference + noise_mw;
                            let serving_base = geometry_mw[s] * fading[s];
                            BeamformingSample {
                                with_beamforming: serving_base * mainlobe / denominator,
                                without_beamforming: serving_base * sidelobe / denominator,
                            }
                        }
                    }
                })
                .collect()
        })
        .collect();

    Ok(BeamformingRun {
        m_grid: config.nakagami_m_grid.clone(),
        thresholds_db: config.sinr_thresholds_db.clone(),
        trials,
    })
}

/// Calibration path: a pinned world with exactly one satellite at the given
/// slant range straight overhead and no terrestrial network, so per trial
/// only the fading draw varies. Coverage then has the closed Gamma-tail
/// form, which the acceptance suite checks against.
pub fn single_link_coverage(
    link: &LinkParams,
    slant_range_km: f64,
    noise: &NoiseConfig,
    thresholds_db: &[f64],
    n_trials: usize,
    master_seed: u64,
) -> Result<Vec<CoverageEstimate>, EngineError> {
    let mut config = crate::engine::config::preset("custom")?;
    config.scenario = Scenario::Custom;
    config.ntn_link = link.clone();
    config.noise = noise.clone();
    config.sinr_thresholds_db = thresholds_db.to_vec();
    config.n_trials = n_trials;
    config.master_seed = master_seed;
    config.shells = vec![ShellConfig::new(slant_range_km, 0.0)];
    config.region.bs_density_per_km2 = 0.0;
    config.validate()?;

    let earth_radius_km = config.shells[0].earth_radius_km;
    let world = World {
        constellation: Constellation {
            shells: vec![(
                config.shells[0].clone(),
                vec![Position3D::new(0.0, 0.0, earth_radius_km + slant_range_km)],
            )],
        },
        region: RegionSample {
            bs_positions: Vec::new(),
            ues: vec![UePlacement { position: PlanarPoint::new(0.0, 0.0), serving_cell: None }],
            typical_ue: 0,
        },
        earth_radius_km,
    };

    let sinrs: Vec<f64> = (0..n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = task_rng(master_seed, StreamDomain::Coverage, t);
            run_trial_in_world(&config, &world, &mut rng).sinr_sc_sat
        })
        .collect();
    Ok(aggregate_coverage(&sinrs, thresholds_db))
}
