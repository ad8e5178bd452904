//! Per-link budgets: power-law pathloss anchored at a free-space reference,
//! sectored antenna gains with a beamforming switch, Nakagami-m fading, and
//! received-power composition. Everything works in linear units internally;
//! dB enters and leaves through the conversion helpers.

use crate::SPEED_OF_LIGHT_KM_PER_S;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("distance {distance_km} km is below the reference distance {reference_km} km")]
    BelowReferenceDistance { distance_km: f64, reference_km: f64 },
    #[error("invalid Nakagami shape m = {0}, must be >= 0.5")]
    InvalidNakagamiShape(f64),
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ChannelError {
    ChannelError::InvalidConfig { field, reason: reason.into() }
}

// ============================================================================
// dB / linear conversions
// ============================================================================

/// dB (or dBm) to linear ratio (or mW).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear ratio (or mW) to dB (or dBm).
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// dBm to milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

/// Milliwatts to dBm.
pub fn mw_to_dbm(mw: f64) -> f64 {
    linear_to_db(mw)
}

// ============================================================================
// Link parameters
// ============================================================================

/// Whether a transmitter is serving the evaluated UE or interfering with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkRole {
    Serving,
    Interfering,
}

/// Beamforming state of the network. When off, every transmitter (the
/// serving one included) radiates at side-lobe gain, isolating the main-lobe
/// gain as the only difference between the two states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beamforming {
    On,
    Off,
}

/// Transmit-side parameters of one network domain (NTN or TN).
#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    pub tx_power_dbm: f64,
    pub mainlobe_gain_dbi: f64,
    pub sidelobe_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub pathloss_exponent: f64,
    pub carrier_frequency_ghz: f64,
    /// Friis anchor distance for the power-law pathloss, km.
    pub reference_distance_km: f64,
    pub nakagami_m: f64,
    pub antennas: usize,
}

impl LinkParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !self.tx_power_dbm.is_finite() {
            return Err(invalid("tx_power_dbm", "must be finite"));
        }
        for (field, v) in [
            ("mainlobe_gain_dbi", self.mainlobe_gain_dbi),
            ("sidelobe_gain_dbi", self.sidelobe_gain_dbi),
            ("rx_gain_dbi", self.rx_gain_dbi),
        ] {
            if !v.is_finite() {
                return Err(invalid(field, "must be finite"));
            }
        }
        if self.pathloss_exponent < 2.0 || self.pathloss_exponent.is_nan() {
            return Err(invalid(
                "pathloss_exponent",
                format!("must be >= 2, got {}", self.pathloss_exponent),
            ));
        }
        if self.carrier_frequency_ghz <= 0.0 || !self.carrier_frequency_ghz.is_finite() {
            return Err(invalid("carrier_ghz", "must be > 0"));
        }
        if self.reference_distance_km <= 0.0 || !self.reference_distance_km.is_finite() {
            return Err(invalid("reference_distance_km", "must be > 0"));
        }
        if self.nakagami_m < 0.5 || self.nakagami_m.is_nan() {
            return Err(invalid("nakagami_m", format!("must be >= 0.5, got {}", self.nakagami_m)));
        }
        if self.antennas == 0 {
            return Err(invalid("antennas", "must be >= 1"));
        }
        Ok(())
    }

    pub fn pathloss_model(&self) -> PathlossModel {
        PathlossModel::friis(self.carrier_frequency_ghz, self.reference_distance_km)
    }
}

/// Receiver noise floor.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    pub noise_power_dbm: f64,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !self.noise_power_dbm.is_finite() {
            return Err(invalid("power_dbm", "must be finite"));
        }
        Ok(())
    }

    pub fn noise_mw(&self) -> f64 {
        dbm_to_mw(self.noise_power_dbm)
    }
}

// ============================================================================
// Pathloss
// ============================================================================

/// Power-law pathloss anchored at a reference gain: below the reference
/// distance the model is out of its domain and `gain` rejects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlossModel {
    pub reference_distance_km: f64,
    /// Linear power gain at the reference distance.
    pub reference_gain: f64,
}

impl PathlossModel {
    /// Free-space (Friis) anchor: gain at `reference_distance_km` equals
    /// `(lambda / (4 pi d0))^2` for the carrier wavelength.
    pub fn friis(carrier_frequency_ghz: f64, reference_distance_km: f64) -> Self {
        let wavelength_km = SPEED_OF_LIGHT_KM_PER_S / (carrier_frequency_ghz * 1e9);
        let amplitude = wavelength_km / (4.0 * PI * reference_distance_km);
        Self { reference_distance_km, reference_gain: amplitude * amplitude }
    }

    /// Linear pathloss gain `g0 * (d/d0)^(-alpha)`, <= 1 for d >= d0.
    pub fn gain(&self, distance_km: f64, exponent: f64) -> Result<f64, ChannelError> {
        if distance_km < self.reference_distance_km {
            return Err(ChannelError::BelowReferenceDistance {
                distance_km,
                reference_km: self.reference_distance_km,
            });
        }
        Ok(self.reference_gain * (distance_km / self.reference_distance_km).powf(-exponent))
    }
}

/// Free-function pathloss entry point; see [`PathlossModel::gain`].
pub fn pathloss_linear(
    distance_km: f64,
    exponent: f64,
    reference: &PathlossModel,
) -> Result<f64, ChannelError> {
    reference.gain(distance_km, exponent)
}

// ============================================================================
// Antenna gains and fading
// ============================================================================

/// (tx, rx) gains in dBi for a link. Beamforming steers the main lobe at the
/// served UE; interferers are seen through the side lobe. With beamforming
/// off, all transmitters radiate at side-lobe gain.
pub fn antenna_gain(role: LinkRole, beamforming: Beamforming, params: &LinkParams) -> (f64, f64) {
    let tx = match (beamforming, role) {
        (Beamforming::On, LinkRole::Serving) => params.mainlobe_gain_dbi,
        _ => params.sidelobe_gain_dbi,
    };
    (tx, params.rx_gain_dbi)
}

/// One small-scale fading realization (power gain, mean 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    pub power_gain: f64,
}

/// Nakagami-m power fading: Gamma(shape m, scale 1/m), so the mean power
/// gain is 1 and m = 1 recovers Rayleigh (exponential power).
pub fn sample_fading<R: Rng>(m: f64, rng: &mut R) -> Result<FadingDraw, ChannelError> {
    if m < 0.5 || m.is_nan() {
        return Err(ChannelError::InvalidNakagamiShape(m));
    }
    let gamma = Gamma::new(m, 1.0 / m).expect("valid Gamma parameters");
    Ok(FadingDraw { power_gain: gamma.sample(rng) })
}

/// Received power in mW: tx power, both antenna gains, pathloss, and the
/// fading power gain, all composed in linear scale.
pub fn received_power_mw(
    link: &LinkParams,
    distance_km: f64,
    fading_power_gain: f64,
    role: LinkRole,
    beamforming: Beamforming,
) -> Result<f64, ChannelError> {
    let (tx_dbi, rx_dbi) = antenna_gain(role, beamforming, link);
    let pl = link.pathloss_model().gain(distance_km, link.pathloss_exponent)?;
    Ok(dbm_to_mw(link.tx_power_dbm) * db_to_linear(tx_dbi) * db_to_linear(rx_dbi) * pl * fading_power_gain)
}
