//! Point-process geometry on the spherical Earth model.
//!
//! Satellites form homogeneous Poisson fields on spherical shells around the
//! Earth; base stations and UEs form planar processes on a square region that
//! is mapped onto the sphere through a tangent plane at the region center.
//! All sampling is driven by an explicit random stream, so identical seeds
//! reproduce identical point sets bit-for-bit.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Mean Earth radius, km.
pub const DEFAULT_EARTH_RADIUS_KM: f64 = 6371.0;
/// Default minimum elevation for a satellite to count as visible, degrees.
pub const DEFAULT_MIN_ELEVATION_DEG: f64 = 10.0;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> GeometryError {
    GeometryError::InvalidConfig { field, reason: reason.into() }
}

// ============================================================================
// Configuration
// ============================================================================

/// One spherical satellite shell: a homogeneous Poisson field of intensity
/// `density_per_km2` on the sphere of radius `earth_radius_km + altitude_km`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellConfig {
    pub altitude_km: f64,
    pub density_per_km2: f64,
    pub earth_radius_km: f64,
    pub min_elevation_deg: f64,
}

impl ShellConfig {
    pub fn new(altitude_km: f64, density_per_km2: f64) -> Self {
        Self {
            altitude_km,
            density_per_km2,
            earth_radius_km: DEFAULT_EARTH_RADIUS_KM,
            min_elevation_deg: DEFAULT_MIN_ELEVATION_DEG,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.altitude_km <= 0.0 || !self.altitude_km.is_finite() {
            return Err(invalid("altitude_km", format!("must be > 0, got {}", self.altitude_km)));
        }
        if self.density_per_km2 < 0.0 || !self.density_per_km2.is_finite() {
            return Err(invalid(
                "density_per_km2",
                format!("must be >= 0, got {}", self.density_per_km2),
            ));
        }
        if self.earth_radius_km <= 0.0 || !self.earth_radius_km.is_finite() {
            return Err(invalid(
                "earth_radius_km",
                format!("must be > 0, got {}", self.earth_radius_km),
            ));
        }
        if !(0.0..90.0).contains(&self.min_elevation_deg) {
            return Err(invalid(
                "min_elevation_deg",
                format!("must be in [0, 90), got {}", self.min_elevation_deg),
            ));
        }
        Ok(())
    }

    /// Radius of the shell sphere, km.
    pub fn shell_radius_km(&self) -> f64 {
        self.earth_radius_km + self.altitude_km
    }

    /// Expected satellite count: intensity times shell area.
    pub fn expected_count(&self) -> f64 {
        self.density_per_km2 * 4.0 * PI * self.shell_radius_km().powi(2)
    }

    /// Earth-central half-angle of the region where this shell is visible
    /// above the shell's minimum elevation, radians.
    pub fn visibility_central_angle_rad(&self) -> f64 {
        let eps = self.min_elevation_deg.to_radians();
        let ratio = (self.earth_radius_km / self.shell_radius_km() * eps.cos()).clamp(-1.0, 1.0);
        ratio.acos() - eps
    }

    /// Fraction of the shell visible from a surface point above the
    /// minimum elevation (spherical-cap area ratio).
    pub fn visible_shell_fraction(&self) -> f64 {
        (1.0 - self.visibility_central_angle_rad().cos()) / 2.0
    }

    /// Ground-footprint area of one satellite of this shell: the Earth cap
    /// from which the satellite sits above the minimum elevation, km^2.
    pub fn footprint_area_km2(&self) -> f64 {
        let psi = self.visibility_central_angle_rad();
        2.0 * PI * self.earth_radius_km.powi(2) * (1.0 - psi.cos())
    }
}

/// Square terrestrial region with Poisson base stations and clustered UEs.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionConfig {
    pub side_km: f64,
    pub bs_density_per_km2: f64,
    pub bs_service_radius_km: f64,
    pub ue_density_per_km2: f64,
    pub ues_per_cell: usize,
}

impl RegionConfig {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.side_km <= 0.0 || !self.side_km.is_finite() {
            return Err(invalid("side_km", format!("must be > 0, got {}", self.side_km)));
        }
        if self.bs_density_per_km2 < 0.0 || !self.bs_density_per_km2.is_finite() {
            return Err(invalid(
                "bs_density_per_km2",
                format!("must be >= 0, got {}", self.bs_density_per_km2),
            ));
        }
        if self.bs_service_radius_km <= 0.0 || !self.bs_service_radius_km.is_finite() {
            return Err(invalid(
                "bs_service_radius_km",
                format!("must be > 0, got {}", self.bs_service_radius_km),
            ));
        }
        if self.ue_density_per_km2 < 0.0 || !self.ue_density_per_km2.is_finite() {
            return Err(invalid(
                "ue_density_per_km2",
                format!("must be >= 0, got {}", self.ue_density_per_km2),
            ));
        }
        if self.ues_per_cell == 0 {
            return Err(invalid("ues_per_cell", "must be >= 1 so a typical UE exists"));
        }
        Ok(())
    }
}

// ============================================================================
// Points
// ============================================================================

/// Earth-centered Cartesian position, km. Satellites sit on their shell
/// sphere; surface nodes sit on the Earth sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &Position3D) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// Point in region coordinates on the tangent plane, km. The region center
/// is the tangent point; `surface_point` maps back onto the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub x_km: f64,
    pub y_km: f64,
}

impl PlanarPoint {
    pub fn new(x_km: f64, y_km: f64) -> Self {
        Self { x_km, y_km }
    }

    pub fn distance_km(&self, other: &PlanarPoint) -> f64 {
        ((self.x_km - other.x_km).powi(2) + (self.y_km - other.y_km).powi(2)).sqrt()
    }
}

/// Project a tangent-plane point onto the Earth sphere. The tangent point is
/// the +z pole, so `|result| = earth_radius_km` exactly.
pub fn surface_point(p: &PlanarPoint, earth_radius_km: f64) -> Position3D {
    let r2 = earth_radius_km * earth_radius_km - p.x_km * p.x_km - p.y_km * p.y_km;
    Position3D::new(p.x_km, p.y_km, r2.max(0.0).sqrt())
}

// ============================================================================
// Sampling
// ============================================================================

/// Sampled multi-shell constellation. Shells are disjoint point sets, one
/// per altitude tier.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub shells: Vec<(ShellConfig, Vec<Position3D>)>,
}

impl Constellation {
    pub fn total_satellites(&self) -> usize {
        self.shells.iter().map(|(_, p)| p.len()).sum()
    }

    /// Position by flattened index (shells concatenated in order).
    pub fn position(&self, index: usize) -> &Position3D {
        let mut offset = index;
        for (_, positions) in &self.shells {
            if offset < positions.len() {
                return &positions[offset];
            }
            offset -= positions.len();
        }
        panic!("satellite index {index} out of range");
    }

    /// Flattened indices of satellites visible from `ue`, applying each
    /// shell's own minimum-elevation threshold.
    pub fn visible_indices(&self, ue: &Position3D) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (shell, positions) in &self.shells {
            for (i, sat) in positions.iter().enumerate() {
                if elevation_angle_deg(ue, sat) >= shell.min_elevation_deg {
                    out.push(offset + i);
                }
            }
            offset += positions.len();
        }
        out
    }
}

/// Sample one shell: a Poisson number of points, i.i.d. uniform on the shell
/// sphere. Uniformity uses the hat-box construction (z uniform on the
/// diameter, longitude uniform).
pub fn sample_shell<R: Rng>(shell: &ShellConfig, rng: &mut R) -> Vec<Position3D> {
    let mean = shell.expected_count();
    let count = if mean > 0.0 {
        Poisson::new(mean).expect("positive mean").sample(rng) as usize
    } else {
        0
    };
    let r = shell.shell_radius_km();
    (0..count)
        .map(|_| {
            let z = r * (1.0 - 2.0 * rng.random::<f64>());
            let phi = TAU * rng.random::<f64>();
            let rho = (r * r - z * z).max(0.0).sqrt();
            Position3D::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

/// Sample every shell of a multi-tier constellation.
pub fn sample_constellation<R: Rng>(shells: &[ShellConfig], rng: &mut R) -> Constellation {
    Constellation {
        shells: shells.iter().map(|s| (s.clone(), sample_shell(s, rng))).collect(),
    }
}

/// One placed UE. `serving_cell` is the index of the base station whose
/// service disk the UE was drawn in, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct UePlacement {
    pub position: PlanarPoint,
    pub serving_cell: Option<usize>,
}

/// Sampled terrestrial snapshot: base stations plus UEs, with one UE
/// flagged as the typical UE for coverage evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSample {
    pub bs_positions: Vec<PlanarPoint>,
    pub ues: Vec<UePlacement>,
    pub typical_ue: usize,
}

impl RegionSample {
    pub fn typical_position(&self) -> PlanarPoint {
        self.ues[self.typical_ue].position
    }
}

/// Sample the terrestrial region: Poisson base stations uniform in the
/// square, then `ues_per_cell` UEs uniform in each base station's service
/// disk. With no base stations the UEs fall back to uniform placement in the
/// region so satellite-only runs stay well-defined. The first UE is typical.
pub fn sample_region<R: Rng>(region: &RegionConfig, rng: &mut R) -> RegionSample {
    let half = region.side_km / 2.0;
    let mean_bs = region.bs_density_per_km2 * region.side_km * region.side_km;
    let n_bs = if mean_bs > 0.0 {
        Poisson::new(mean_bs).expect("positive mean").sample(rng) as usize
    } else {
        0
    };
    let bs_positions: Vec<PlanarPoint> = (0..n_bs)
        .map(|_| {
            PlanarPoint::new(
                half * (2.0 * rng.random::<f64>() - 1.0),
                half * (2.0 * rng.random::<f64>() - 1.0),
            )
        })
        .collect();

    let mut ues = Vec::new();
    if bs_positions.is_empty() {
        for _ in 0..region.ues_per_cell {
            let p = PlanarPoint::new(
                half * (2.0 * rng.random::<f64>() - 1.0),
                half * (2.0 * rng.random::<f64>() - 1.0),
            );
            ues.push(UePlacement { position: p, serving_cell: None });
        }
    } else {
        for (b, bs) in bs_positions.iter().enumerate() {
            for _ in 0..region.ues_per_cell {
                let radius = region.bs_service_radius_km * rng.random::<f64>().sqrt();
                let theta = TAU * rng.random::<f64>();
                let p = PlanarPoint::new(bs.x_km + radius * theta.cos(), bs.y_km + radius * theta.sin());
                ues.push(UePlacement { position: p, serving_cell: Some(b) });
            }
        }
    }
    RegionSample { bs_positions, ues, typical_ue: 0 }
}

// ============================================================================
// Visibility and distances
// ============================================================================

/// Elevation of the UE->satellite ray above the local horizon plane,
/// degrees in [-90, 90].
pub fn elevation_angle_deg(ue: &Position3D, sat: &Position3D) -> f64 {
    let ue_norm = ue.norm();
    let d = Position3D::new(sat.x - ue.x, sat.y - ue.y, sat.z - ue.z);
    let d_norm = d.norm();
    if d_norm == 0.0 || ue_norm == 0.0 {
        return 90.0;
    }
    let sin_elev = (d.dot(ue) / (ue_norm * d_norm)).clamp(-1.0, 1.0);
    sin_elev.asin().to_degrees()
}

/// Indices of satellites whose elevation is at least `min_elevation_deg`.
pub fn visible_satellites(
    satellites: &[Position3D],
    ue: &Position3D,
    min_elevation_deg: f64,
) -> Vec<usize> {
    satellites
        .iter()
        .enumerate()
        .filter(|(_, sat)| elevation_angle_deg(ue, sat) >= min_elevation_deg)
        .map(|(i, _)| i)
        .collect()
}

/// Euclidean distance, km.
pub fn slant_range_km(a: &Position3D, b: &Position3D) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2) + (a.z - b.z).powi(2)).sqrt()
}
