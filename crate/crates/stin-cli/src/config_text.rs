//! Flat key-value configuration: parsing, overrides, and the canonical
//! serialization used for round-tripping and manifests.
//!
//! Every dotted key maps to exactly one field of
//! [`stin_core::engine::ExperimentConfig`]; unknown keys are rejected and
//! value errors name the offending key. All dB/dBm quantities stay in the
//! dB domain in files and convert to linear exactly once inside the engine.

use std::collections::BTreeMap;
use stin_core::connectivity::Combining;
use stin_core::engine::{EngineError, ExperimentConfig, Scenario};
use stin_core::geometry::ShellConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("malformed config line {line}: `{text}` (expected `key = value`)")]
    MalformedLine { line: usize, text: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn bad(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue { key: key.to_string(), reason: reason.into() }
}

/// Config-file sections in canonical order, with the keys each contains.
const SECTIONS: &[(&str, &[&str])] = &[
    ("run", &["scenario", "seed", "trials"]),
    (
        "non-terrestrial network: satellite shells and link",
        &[
            "ntn.altitude_km",
            "ntn.density_per_km2",
            "ntn.min_elevation_deg",
            "ntn.earth_radius_km",
            "ntn.tx_power_dbm",
            "ntn.mainlobe_gain_dbi",
            "ntn.sidelobe_gain_dbi",
            "ntn.rx_gain_dbi",
            "ntn.pathloss_exponent",
            "ntn.carrier_ghz",
            "ntn.reference_distance_km",
            "ntn.nakagami_m",
            "ntn.antennas",
        ],
    ),
    (
        "terrestrial network: region and link",
        &[
            "tn.side_km",
            "tn.bs_density_per_km2",
            "tn.bs_service_radius_km",
            "tn.ue_density_per_km2",
            "tn.ues_per_cell",
            "tn.tx_power_dbm",
            "tn.mainlobe_gain_dbi",
            "tn.sidelobe_gain_dbi",
            "tn.rx_gain_dbi",
            "tn.pathloss_exponent",
            "tn.carrier_ghz",
            "tn.reference_distance_km",
            "tn.nakagami_m",
            "tn.antennas",
        ],
    ),
    ("receiver", &["noise.power_dbm"]),
    (
        "association and combining",
        &[
            "connect.serving_satellites",
            "connect.serving_bss",
            "connect.combining",
            "connect.sat_blockage_prob",
            "connect.bs_blockage_prob",
            "connect.bs_min_power_dbm",
            "connect.interference_min_elevation_deg",
        ],
    ),
    ("synchronization", &["sync.cp_length_us", "sync.slot_duration_us"]),
    ("pilots", &["pilots.count", "pilots.snr_db", "pilots.num_ues", "pilots.antennas"]),
    (
        "sweeps",
        &[
            "sweep.sinr_thresholds_db",
            "sweep.nakagami_m_grid",
            "sweep.pilot_grid",
            "sweep.pilot_seeds",
            "sweep.pilot_samples",
        ],
    ),
];

fn fmt_f64_list(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_usize_list(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Complete canonical map for a config; the key set is the schema.
pub fn config_to_map(cfg: &ExperimentConfig) -> BTreeMap<String, String> {
    let shell = &cfg.shells[0];
    let altitudes: Vec<f64> = cfg.shells.iter().map(|s| s.altitude_km).collect();
    let densities: Vec<f64> = cfg.shells.iter().map(|s| s.density_per_km2).collect();
    let entries: Vec<(&str, String)> = vec![
        ("scenario", cfg.scenario.as_str().to_string()),
        ("seed", cfg.master_seed.to_string()),
        ("trials", cfg.n_trials.to_string()),
        ("ntn.altitude_km", fmt_f64_list(&altitudes)),
        ("ntn.density_per_km2", fmt_f64_list(&densities)),
        ("ntn.min_elevation_deg", shell.min_elevation_deg.to_string()),
        ("ntn.earth_radius_km", shell.earth_radius_km.to_string()),
        ("ntn.tx_power_dbm", cfg.ntn_link.tx_power_dbm.to_string()),
        ("ntn.mainlobe_gain_dbi", cfg.ntn_link.mainlobe_gain_dbi.to_string()),
        ("ntn.sidelobe_gain_dbi", cfg.ntn_link.sidelobe_gain_dbi.to_string()),
        ("ntn.rx_gain_dbi", cfg.ntn_link.rx_gain_dbi.to_string()),
        ("ntn.pathloss_exponent", cfg.ntn_link.pathloss_exponent.to_string()),
        ("ntn.carrier_ghz", cfg.ntn_link.carrier_frequency_ghz.to_string()),
        ("ntn.reference_distance_km", cfg.ntn_link.reference_distance_km.to_string()),
        ("ntn.nakagami_m", cfg.ntn_link.nakagami_m.to_string()),
        ("ntn.antennas", cfg.ntn_link.antennas.to_string()),
        ("tn.side_km", cfg.region.side_km.to_string()),
        ("tn.bs_density_per_km2", cfg.region.bs_density_per_km2.to_string()),
        ("tn.bs_service_radius_km", cfg.region.bs_service_radius_km.to_string()),
        ("tn.ue_density_per_km2", cfg.region.ue_density_per_km2.to_string()),
        ("tn.ues_per_cell", cfg.region.ues_per_cell.to_string()),
        ("tn.tx_power_dbm", cfg.tn_link.tx_power_dbm.to_string()),
        ("tn.mainlobe_gain_dbi", cfg.tn_link.mainlobe_gain_dbi.to_string()),
        ("tn.sidelobe_gain_dbi", cfg.tn_link.sidelobe_gain_dbi.to_string()),
        ("tn.rx_gain_dbi", cfg.tn_link.rx_gain_dbi.to_string()),
        ("tn.pathloss_exponent", cfg.tn_link.pathloss_exponent.to_string()),
        ("tn.carrier_ghz", cfg.tn_link.carrier_frequency_ghz.to_string()),
        ("tn.reference_distance_km", cfg.tn_link.reference_distance_km.to_string()),
        ("tn.nakagami_m", cfg.tn_link.nakagami_m.to_string()),
        ("tn.antennas", cfg.tn_link.antennas.to_string()),
        ("noise.power_dbm", cfg.noise.noise_power_dbm.to_string()),
        ("connect.serving_satellites", cfg.serving_satellites.to_string()),
        ("connect.serving_bss", cfg.serving_bss.to_string()),
        (
            "connect.combining",
            match cfg.combining {
                Combining::Joint => "joint".to_string(),
                Combining::Selection => "selection".to_string(),
            },
        ),
        ("connect.sat_blockage_prob", cfg.availability.sat_blockage_prob.to_string()),
        ("connect.bs_blockage_prob", cfg.availability.bs_blockage_prob.to_string()),
        ("connect.bs_min_power_dbm", cfg.availability.bs_min_power_dbm.to_string()),
        (
            "connect.interference_min_elevation_deg",
            match cfg.interference_min_elevation_deg {
                Some(v) => v.to_string(),
                None => "none".to_string(),
            },
        ),
        ("sync.cp_length_us", cfg.sync.cp_length_us.to_string()),
        ("sync.slot_duration_us", cfg.sync.slot_duration_us.to_string()),
        ("pilots.count", cfg.pilots.num_pilots.to_string()),
        ("pilots.snr_db", cfg.pilots.pilot_snr_db.to_string()),
        ("pilots.num_ues", cfg.pilots.num_ues.to_string()),
        ("pilots.antennas", cfg.pilots.antennas.to_string()),
        ("sweep.sinr_thresholds_db", fmt_f64_list(&cfg.sinr_thresholds_db)),
        ("sweep.nakagami_m_grid", fmt_f64_list(&cfg.nakagami_m_grid)),
        ("sweep.pilot_grid", fmt_usize_list(&cfg.pilot_grid)),
        ("sweep.pilot_seeds", cfg.pilot_seeds.to_string()),
        ("sweep.pilot_samples", cfg.pilot_samples.to_string()),
    ];
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Canonical config text: sections in schema order, `key = value` lines.
pub fn to_text(cfg: &ExperimentConfig) -> String {
    let map = config_to_map(cfg);
    let mut out = String::from("# stin-sim experiment configuration\n");
    for (section, keys) in SECTIONS {
        out.push_str(&format!("\n# {section}\n"));
        for key in *keys {
            out.push_str(&format!("{key} = {}\n", map[*key]));
        }
    }
    out
}

/// Parse raw `key = value` lines; `#` starts a comment, blank lines skipped.
pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::MalformedLine { line: i + 1, text: raw.to_string() })?;
        entries.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// Overlay one entry onto a schema-complete map, rejecting unknown keys.
pub fn overlay(map: &mut BTreeMap<String, String>, key: &str, value: &str) -> Result<(), ConfigError> {
    if !map.contains_key(key) {
        return Err(ConfigError::UnknownKey(key.to_string()));
    }
    map.insert(key.to_string(), value.to_string());
    Ok(())
}

fn get<'m>(map: &'m BTreeMap<String, String>, key: &str) -> &'m str {
    map.get(key).map(String::as_str).expect("schema-complete map")
}

fn parse_f64(map: &BTreeMap<String, String>, key: &str) -> Result<f64, ConfigError> {
    get(map, key).parse::<f64>().map_err(|_| bad(key, format!("`{}` is not a number", get(map, key))))
}

fn parse_usize(map: &BTreeMap<String, String>, key: &str) -> Result<usize, ConfigError> {
    get(map, key)
        .parse::<usize>()
        .map_err(|_| bad(key, format!("`{}` is not a nonnegative integer", get(map, key))))
}

fn parse_u64(map: &BTreeMap<String, String>, key: &str) -> Result<u64, ConfigError> {
    get(map, key)
        .parse::<u64>()
        .map_err(|_| bad(key, format!("`{}` is not a 64-bit unsigned integer", get(map, key))))
}

fn parse_opt_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, ConfigError> {
    let raw = get(map, key);
    if raw.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    raw.parse::<f64>().map(Some).map_err(|_| bad(key, format!("`{raw}` is not a number or `none`")))
}

/// Comma list of numbers, or a `start:step:end` range (end inclusive).
fn parse_f64_list(map: &BTreeMap<String, String>, key: &str) -> Result<Vec<f64>, ConfigError> {
    let raw = get(map, key);
    if raw.contains(':') {
        let parts: Vec<&str> = raw.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(key, format!("`{raw}` is not `start:step:end`")));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(key, format!("`{raw}` has a non-numeric range bound")))?;
        let (start, step, end) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || step.is_nan() {
            return Err(bad(key, "range step must be positive"));
        }
        let mut values = Vec::new();
        let mut i = 0u64;
        loop {
            let v = start + step * i as f64;
            if v > end + step * 1e-9 {
                break;
            }
            values.push(v);
            i += 1;
        }
        return Ok(values);
    }
    raw.split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(key, format!("`{raw}` is not a comma-separated number list")))
}

fn parse_usize_list(map: &BTreeMap<String, String>, key: &str) -> Result<Vec<usize>, ConfigError> {
    let raw = get(map, key);
    raw.split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(key, format!("`{raw}` is not a comma-separated integer list")))
}

/// Build and validate a config from a schema-complete map.
pub fn build_config(map: &BTreeMap<String, String>) -> Result<ExperimentConfig, ConfigError> {
    let scenario_raw = get(map, "scenario");
    let scenario = Scenario::parse(scenario_raw)
        .ok_or_else(|| bad("scenario", format!("`{scenario_raw}` is not a known scenario")))?;

    let altitudes = parse_f64_list(map, "ntn.altitude_km")?;
    let densities = parse_f64_list(map, "ntn.density_per_km2")?;
    if altitudes.len() != densities.len() {
        return Err(bad(
            "ntn.density_per_km2",
            format!("{} densities for {} altitudes", densities.len(), altitudes.len()),
        ));
    }
    let min_elevation_deg = parse_f64(map, "ntn.min_elevation_deg")?;
    let earth_radius_km = parse_f64(map, "ntn.earth_radius_km")?;
    let shells: Vec<ShellConfig> = altitudes
        .iter()
        .zip(&densities)
        .map(|(&altitude_km, &density_per_km2)| ShellConfig {
            altitude_km,
            density_per_km2,
            earth_radius_km,
            min_elevation_deg,
        })
        .collect();

    let combining_raw = get(map, "connect.combining");
    let combining = match combining_raw {
        "joint" => Combining::Joint,
        "selection" => Combining::Selection,
        other => {
            return Err(bad("connect.combining", format!("`{other}` is not joint|selection")));
        }
    };

    let mut cfg = stin_core::engine::preset("custom")?;
    cfg.scenario = scenario;
    cfg.shells = shells;
    cfg.region.side_km = parse_f64(map, "tn.side_km")?;
    cfg.region.bs_density_per_km2 = parse_f64(map, "tn.bs_density_per_km2")?;
    cfg.region.bs_service_radius_km = parse_f64(map, "tn.bs_service_radius_km")?;
    cfg.region.ue_density_per_km2 = parse_f64(map, "tn.ue_density_per_km2")?;
    cfg.region.ues_per_cell = parse_usize(map, "tn.ues_per_cell")?;
    cfg.ntn_link.tx_power_dbm = parse_f64(map, "ntn.tx_power_dbm")?;
    cfg.ntn_link.mainlobe_gain_dbi = parse_f64(map, "ntn.mainlobe_gain_dbi")?;
    cfg.ntn_link.sidelobe_gain_dbi = parse_f64(map, "ntn.sidelobe_gain_dbi")?;
    cfg.ntn_link.rx_gain_dbi = parse_f64(map, "ntn.rx_gain_dbi")?;
    cfg.ntn_link.pathloss_exponent = parse_f64(map, "ntn.pathloss_exponent")?;
    cfg.ntn_link.carrier_frequency_ghz = parse_f64(map, "ntn.carrier_ghz")?;
    cfg.ntn_link.reference_distance_km = parse_f64(map, "ntn.reference_distance_km")?;
    cfg.ntn_link.nakagami_m = parse_f64(map, "ntn.nakagami_m")?;
    cfg.ntn_link.antennas = parse_usize(map, "ntn.antennas")?;
    cfg.tn_link.tx_power_dbm = parse_f64(map, "tn.tx_power_dbm")?;
    cfg.tn_link.mainlobe_gain_dbi = parse_f64(map, "tn.mainlobe_gain_dbi")?;
    cfg.tn_link.sidelobe_gain_dbi = parse_f64(map, "tn.sidelobe_gain_dbi")?;
    cfg.tn_link.rx_gain_dbi = parse_f64(map, "tn.rx_gain_dbi")?;
    cfg.tn_link.pathloss_exponent = parse_f64(map, "tn.pathloss_exponent")?;
    cfg.tn_link.carrier_frequency_ghz = parse_f64(map, "tn.carrier_ghz")?;
    cfg.tn_link.reference_distance_km = parse_f64(map, "tn.reference_distance_km")?;
    cfg.tn_link.nakagami_m = parse_f64(map, "tn.nakagami_m")?;
    cfg.tn_link.antennas = parse_usize(map, "tn.antennas")?;
    cfg.noise.noise_power_dbm = parse_f64(map, "noise.power_dbm")?;
    cfg.serving_satellites = parse_usize(map, "connect.serving_satellites")?;
    cfg.serving_bss = parse_usize(map, "connect.serving_bss")?;
    cfg.combining = combining;
    cfg.availability.sat_blockage_prob = parse_f64(map, "connect.sat_blockage_prob")?;
    cfg.availability.bs_blockage_prob = parse_f64(map, "connect.bs_blockage_prob")?;
    cfg.availability.bs_min_power_dbm = parse_f64(map, "connect.bs_min_power_dbm")?;
    cfg.interference_min_elevation_deg =
        parse_opt_f64(map, "connect.interference_min_elevation_deg")?;
    cfg.sync.cp_length_us = parse_f64(map, "sync.cp_length_us")?;
    cfg.sync.slot_duration_us = parse_f64(map, "sync.slot_duration_us")?;
    cfg.pilots.num_pilots = parse_usize(map, "pilots.count")?;
    cfg.pilots.pilot_snr_db = parse_f64(map, "pilots.snr_db")?;
    cfg.pilots.num_ues = parse_usize(map, "pilots.num_ues")?;
    cfg.pilots.antennas = parse_usize(map, "pilots.antennas")?;
    cfg.sinr_thresholds_db = parse_f64_list(map, "sweep.sinr_thresholds_db")?;
    cfg.nakagami_m_grid = parse_f64_list(map, "sweep.nakagami_m_grid")?;
    cfg.pilot_grid = parse_usize_list(map, "sweep.pilot_grid")?;
    cfg.pilot_seeds = parse_usize(map, "sweep.pilot_seeds")?;
    cfg.pilot_samples = parse_usize(map, "sweep.pilot_samples")?;
    cfg.n_trials = parse_usize(map, "trials")?;
    cfg.master_seed = parse_u64(map, "seed")?;

    cfg.validate()?;
    Ok(cfg)
}

/// Parse a config file on top of a base config (defaults for missing keys).
pub fn parse_onto(base: &ExperimentConfig, text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut map = config_to_map(base);
    for (key, value) in parse_entries(text)? {
        overlay(&mut map, &key, &value)?;
    }
    build_config(&map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stin_core::engine::preset;

    #[test]
    fn round_trip_presets_exactly() {
        for name in ["fig3", "fig4", "fig6", "custom"] {
            let cfg = preset(name).unwrap();
            let text = to_text(&cfg);
            let back = parse_onto(&preset("custom").unwrap(), &text).unwrap();
            assert_eq!(back, cfg, "round trip changed the {name} config");
        }
    }

    #[test]
    fn round_trip_survives_awkward_values() {
        let mut cfg = preset("fig6").unwrap();
        cfg.shells = vec![
            ShellConfig { altitude_km: 500.0, density_per_km2: 5e-7, ..ShellConfig::new(1.0, 0.0) },
            ShellConfig { altitude_km: 1187.3, density_per_km2: 1.25e-7, ..ShellConfig::new(1.0, 0.0) },
        ];
        cfg.availability.bs_min_power_dbm = f64::NEG_INFINITY;
        cfg.interference_min_elevation_deg = Some(12.5);
        cfg.sinr_thresholds_db = vec![-10.0, -2.5, 0.1, 7.75];
        cfg.master_seed = u64::MAX;
        let back = parse_onto(&preset("custom").unwrap(), &to_text(&cfg)).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let err = parse_onto(&preset("custom").unwrap(), "ntn.altitdue_km = 500\n").unwrap_err();
        assert!(err.to_string().contains("ntn.altitdue_km"), "{err}");
    }

    #[test]
    fn invalid_values_name_the_key() {
        let base = preset("custom").unwrap();
        let err = parse_onto(&base, "ntn.density_per_km2 = -3e-7\n").unwrap_err();
        assert!(err.to_string().contains("ntn.density_per_km2"), "{err}");

        let err = parse_onto(&base, "tn.side_km = fifty\n").unwrap_err();
        assert!(err.to_string().contains("tn.side_km"), "{err}");

        let err = parse_onto(&base, "sweep.sinr_thresholds_db = 5,4,3\n").unwrap_err();
        assert!(err.to_string().contains("sweep.sinr_thresholds_db"), "{err}");
    }

    #[test]
    fn threshold_range_syntax() {
        let base = preset("custom").unwrap();
        let cfg = parse_onto(&base, "sweep.sinr_thresholds_db = -10:5:20\n").unwrap();
        assert_eq!(cfg.sinr_thresholds_db, vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let base = preset("custom").unwrap();
        let cfg = parse_onto(&base, "\n# comment\nseed = 99 # trailing\n\n").unwrap();
        assert_eq!(cfg.master_seed, 99);
    }

    #[test]
    fn empty_threshold_grid_rejected_at_parse_time() {
        let base = preset("custom").unwrap();
        let err = parse_onto(&base, "sweep.sinr_thresholds_db = \n").unwrap_err();
        assert!(err.to_string().contains("sweep.sinr_thresholds_db"), "{err}");
    }

    #[test]
    fn shell_list_lengths_must_match() {
        let base = preset("custom").unwrap();
        let err = parse_onto(&base, "ntn.altitude_km = 500,1200\n").unwrap_err();
        assert!(err.to_string().contains("ntn.density_per_km2"), "{err}");
        let cfg =
            parse_onto(&base, "ntn.altitude_km = 500,1200\nntn.density_per_km2 = 5e-7,1e-7\n")
                .unwrap();
        assert_eq!(cfg.shells.len(), 2);
        assert_eq!(cfg.shells[1].altitude_km, 1200.0);
        assert_eq!(cfg.shells[1].density_per_km2, 1e-7);
    }
}
