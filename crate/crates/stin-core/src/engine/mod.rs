//! Monte Carlo driver: experiment configuration and presets, deterministic
//! trial orchestration, and the coverage / beamforming / pilot-discrepancy
//! runs. Trials are independent work units on counter-derived random
//! streams, so parallel and serial execution produce identical results.

mod config;
mod discrepancy;
mod runs;
mod trial;

pub use config::{preset, EngineError, ExperimentConfig, Scenario};
pub use discrepancy::{discrepancy_curve, PilotDiscrepancy};
pub use runs::{
    coverage_curve, run_beamforming, run_connectivity, single_link_coverage, BeamformingRun,
    BeamformingSample, ConnectivityRun, CoverageEstimate, Scheme,
};
pub use trial::{
    evaluate_trial, run_trial, run_trial_in_world, sample_world, TrialDraws, TrialResult, World,
};
