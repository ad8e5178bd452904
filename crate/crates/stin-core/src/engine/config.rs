//! Experiment configuration: one validated record holding every model
//! parameter, plus the named experiment presets.

use crate::channel::{LinkParams, NoiseConfig};
use crate::connectivity::{AvailabilityModel, Combining};
use crate::estimation::PilotConfig;
use crate::geometry::{RegionConfig, ShellConfig};
use crate::sync::SyncConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("unknown preset `{0}`, expected fig3_beamforming, fig4_pilots, or fig6_mc_vs_sc")]
    UnknownPreset(String),
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> EngineError {
    EngineError::InvalidConfig { field: field.into(), reason: reason.into() }
}

/// Which experiment a run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Beamforming vs non-beamforming satellite coverage over a Nakagami-m grid.
    Fig3Beamforming,
    /// CDF discrepancy between ideal- and estimated-channel signals over a pilot grid.
    Fig4Pilots,
    /// Multi-connectivity vs single-connectivity coverage in the SS-SBS setup.
    Fig6McVsSc,
    /// Connectivity run with the config taken as-is.
    Custom,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Fig3Beamforming => "fig3_beamforming",
            Scenario::Fig4Pilots => "fig4_pilots",
            Scenario::Fig6McVsSc => "fig6_mc_vs_sc",
            Scenario::Custom => "custom",
        }
    }

    pub fn parse(name: &str) -> Option<Scenario> {
        match name {
            "fig3_beamforming" | "fig3" => Some(Scenario::Fig3Beamforming),
            "fig4_pilots" | "fig4" => Some(Scenario::Fig4Pilots),
            "fig6_mc_vs_sc" | "fig6" => Some(Scenario::Fig6McVsSc),
            "custom" => Some(Scenario::Custom),
            _ => None,
        }
    }
}

/// Full experiment description. Field groups mirror the flat config-file
/// sections (`ntn.*`, `tn.*`, `noise.*`, `connect.*`, `sync.*`, `pilots.*`,
/// `sweep.*`); validation errors name those keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Satellite shells; one entry per altitude tier.
    pub shells: Vec<ShellConfig>,
    pub region: RegionConfig,
    pub ntn_link: LinkParams,
    pub tn_link: LinkParams,
    pub noise: NoiseConfig,
    pub pilots: PilotConfig,
    pub sync: SyncConfig,
    pub availability: AvailabilityModel,
    pub combining: Combining,
    /// Serving-set sizes (K satellites, L base stations); K = L = 1 is the
    /// SS-SBS setup, L = 0 the satellite-only one.
    pub serving_satellites: usize,
    pub serving_bss: usize,
    /// When set, only satellites at or above this elevation contribute
    /// interference; `None` sums over the whole visible dome.
    pub interference_min_elevation_deg: Option<f64>,
    pub sinr_thresholds_db: Vec<f64>,
    pub nakagami_m_grid: Vec<f64>,
    pub pilot_grid: Vec<usize>,
    pub pilot_seeds: usize,
    pub pilot_samples: usize,
    pub n_trials: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.shells.is_empty() {
            return Err(invalid("ntn.altitude_km", "at least one shell required"));
        }
        for shell in &self.shells {
            shell
                .validate()
                .map_err(|e| prefixed("ntn", e.to_string()))?;
            if shell.earth_radius_km != self.shells[0].earth_radius_km {
                return Err(invalid("ntn.earth_radius_km", "all shells share one Earth radius"));
            }
        }
        self.region.validate().map_err(|e| prefixed("tn", e.to_string()))?;
        self.ntn_link.validate().map_err(|e| prefixed("ntn", e.to_string()))?;
        self.tn_link.validate().map_err(|e| prefixed("tn", e.to_string()))?;
        self.noise.validate().map_err(|e| prefixed("noise", e.to_string()))?;
        self.pilots.validate().map_err(|e| prefixed("pilots", e.to_string()))?;
        self.sync.validate().map_err(|e| prefixed("sync", e.to_string()))?;
        self.availability.validate().map_err(|e| prefixed("connect", e.to_string()))?;

        if self.serving_satellites == 0 {
            return Err(invalid("connect.serving_satellites", "must be >= 1"));
        }
        if let Some(cap) = self.interference_min_elevation_deg {
            if !(0.0..90.0).contains(&cap) {
                return Err(invalid(
                    "connect.interference_min_elevation_deg",
                    format!("must be in [0, 90), got {cap}"),
                ));
            }
        }
        if self.sinr_thresholds_db.is_empty() {
            return Err(invalid("sweep.sinr_thresholds_db", "must not be empty"));
        }
        if self.sinr_thresholds_db.iter().any(|t| !t.is_finite()) {
            return Err(invalid("sweep.sinr_thresholds_db", "entries must be finite"));
        }
        if self.sinr_thresholds_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("sweep.sinr_thresholds_db", "must be strictly increasing"));
        }
        if self.nakagami_m_grid.is_empty() {
            return Err(invalid("sweep.nakagami_m_grid", "must not be empty"));
        }
        if self.nakagami_m_grid.iter().any(|&m| m < 0.5 || !m.is_finite()) {
            return Err(invalid("sweep.nakagami_m_grid", "entries must be >= 0.5"));
        }
        if self.pilot_grid.is_empty() {
            return Err(invalid("sweep.pilot_grid", "must not be empty"));
        }
        if self.pilot_grid.contains(&0) {
            return Err(invalid("sweep.pilot_grid", "entries must be >= 1"));
        }
        if self.pilot_seeds == 0 {
            return Err(invalid("sweep.pilot_seeds", "must be >= 1"));
        }
        if self.pilot_samples == 0 {
            return Err(invalid("sweep.pilot_samples", "must be >= 1"));
        }
        if self.n_trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        Ok(())
    }
}

fn prefixed(section: &str, message: String) -> EngineError {
    // Module errors read "invalid <field>: <reason>"; qualify the field with
    // its config-file section.
    match message.strip_prefix("invalid ") {
        Some(rest) => match rest.split_once(": ") {
            Some((field, reason)) => invalid(format!("{section}.{field}"), reason),
            None => invalid(section, message),
        },
        None => invalid(section, message),
    }
}

// ============================================================================
// Presets
// ============================================================================

fn base_config(scenario: Scenario) -> ExperimentConfig {
    ExperimentConfig {
        scenario,
        shells: vec![ShellConfig::new(500.0, 5e-7)],
        region: RegionConfig {
            side_km: 50.0,
            bs_density_per_km2: 6e-3,
            bs_service_radius_km: 8.0,
            ue_density_per_km2: 4e-6,
            ues_per_cell: 4,
        },
        ntn_link: LinkParams {
            tx_power_dbm: 50.0,
            mainlobe_gain_dbi: 30.0,
            sidelobe_gain_dbi: 10.0,
            rx_gain_dbi: 10.0,
            pathloss_exponent: 2.0,
            carrier_frequency_ghz: 2.0,
            reference_distance_km: 1.0,
            nakagami_m: 2.0,
            antennas: 4,
        },
        tn_link: LinkParams {
            tx_power_dbm: 46.0,
            mainlobe_gain_dbi: 0.0,
            sidelobe_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
            pathloss_exponent: 3.5,
            carrier_frequency_ghz: 2.0,
            reference_distance_km: 1.0,
            nakagami_m: 1.0,
            antennas: 4,
        },
        noise: NoiseConfig { noise_power_dbm: -110.0 },
        pilots: PilotConfig { num_pilots: 16, pilot_snr_db: 10.0, num_ues: 16, antennas: 4 },
        sync: SyncConfig::default(),
        availability: AvailabilityModel {
            sat_blockage_prob: 0.0,
            bs_blockage_prob: 0.0,
            bs_min_power_dbm: f64::NEG_INFINITY,
        },
        combining: Combining::Joint,
        serving_satellites: 1,
        serving_bss: 1,
        interference_min_elevation_deg: None,
        sinr_thresholds_db: (-10..=20).map(f64::from).collect(),
        nakagami_m_grid: vec![1.0, 2.0, 5.0],
        pilot_grid: vec![1, 2, 4, 8, 16],
        pilot_seeds: 20,
        pilot_samples: 2000,
        n_trials: 10_000,
        master_seed: 1729,
    }
}

/// Named experiment presets. `fig3`/`fig4`/`fig6` are accepted as short
/// aliases; `custom` starts from the fig6 parameter set.
pub fn preset(name: &str) -> Result<ExperimentConfig, EngineError> {
    let scenario =
        Scenario::parse(name).ok_or_else(|| EngineError::UnknownPreset(name.to_string()))?;
    let mut cfg = base_config(scenario);
    match scenario {
        // Dense satellite field, no terrestrial network, beams compared over
        // the Nakagami-m grid.
        Scenario::Fig3Beamforming => {
            cfg.shells = vec![ShellConfig::new(500.0, 1e-5)];
            cfg.region.bs_density_per_km2 = 0.0;
            cfg.serving_bss = 0;
        }
        // Same field as the beamforming run with m = 2, swept over the
        // pilot-count grid.
        Scenario::Fig4Pilots => {
            cfg.shells = vec![ShellConfig::new(500.0, 1e-5)];
            cfg.region.bs_density_per_km2 = 0.0;
            cfg.serving_bss = 0;
            cfg.ntn_link.nakagami_m = 2.0;
        }
        // The rural SS-SBS case study parameters.
        Scenario::Fig6McVsSc | Scenario::Custom => {}
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_fig3_values() {
        let cfg = preset("fig3_beamforming").unwrap();
        assert_eq!(cfg.shells.len(), 1);
        assert_eq!(cfg.shells[0].density_per_km2, 1e-5);
        assert_eq!(cfg.shells[0].altitude_km, 500.0);
        assert_eq!(cfg.ntn_link.tx_power_dbm, 50.0);
        assert_eq!(cfg.ntn_link.mainlobe_gain_dbi, 30.0);
        assert_eq!(cfg.ntn_link.rx_gain_dbi, 10.0);
        assert_eq!(cfg.ntn_link.pathloss_exponent, 2.0);
        assert_eq!(cfg.region.ue_density_per_km2, 4e-6);
        assert_eq!(cfg.region.bs_density_per_km2, 0.0);
        assert_eq!(cfg.nakagami_m_grid, vec![1.0, 2.0, 5.0]);
        cfg.validate().unwrap();
    }

    #[test]
    fn preset_fig4_is_fig3_with_m2() {
        let fig3 = preset("fig3").unwrap();
        let fig4 = preset("fig4").unwrap();
        assert_eq!(fig4.ntn_link.nakagami_m, 2.0);
        assert_eq!(fig4.shells, fig3.shells);
        assert_eq!(fig4.pilot_grid, vec![1, 2, 4, 8, 16]);
        assert!(fig4.pilot_seeds >= 20);
        fig4.validate().unwrap();
    }

    #[test]
    fn preset_fig6_values() {
        let cfg = preset("fig6").unwrap();
        assert_eq!(cfg.region.side_km, 50.0);
        assert_eq!(cfg.region.bs_density_per_km2, 6e-3);
        assert_eq!(cfg.region.bs_service_radius_km, 8.0);
        assert_eq!(cfg.region.ues_per_cell, 4);
        assert_eq!(cfg.tn_link.tx_power_dbm, 46.0);
        assert_eq!(cfg.tn_link.pathloss_exponent, 3.5);
        assert_eq!(cfg.shells[0].altitude_km, 500.0);
        assert_eq!(cfg.shells[0].density_per_km2, 5e-7);
        assert_eq!(cfg.ntn_link.tx_power_dbm, 50.0);
        assert_eq!(cfg.ntn_link.mainlobe_gain_dbi, 30.0);
        assert_eq!(cfg.ntn_link.sidelobe_gain_dbi, 10.0);
        assert_eq!(cfg.ntn_link.pathloss_exponent, 2.0);
        assert_eq!(cfg.noise.noise_power_dbm, -110.0);
        assert_eq!(cfg.ntn_link.antennas, 4);
        assert_eq!(cfg.tn_link.antennas, 4);
        assert_eq!(cfg.serving_satellites, 1);
        assert_eq!(cfg.serving_bss, 1);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_preset_is_rejected() {
        assert!(matches!(preset("fig9"), Err(EngineError::UnknownPreset(_))));
    }

    #[test]
    fn validation_names_the_offending_key() {
        let mut cfg = preset("fig6").unwrap();
        cfg.shells[0].density_per_km2 = -2.0;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("ntn.density_per_km2"), "message: {msg}");

        let mut cfg = preset("fig6").unwrap();
        cfg.sinr_thresholds_db = vec![0.0, 0.0];
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("sweep.sinr_thresholds_db"), "message: {msg}");

        let mut cfg = preset("fig6").unwrap();
        cfg.n_trials = 0;
        assert!(cfg.validate().unwrap_err().to_string().contains("trials"));
    }
}
