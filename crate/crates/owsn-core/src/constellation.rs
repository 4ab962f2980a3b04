//! Walker-delta constellation generation and circular-orbit propagation.
//!
//! A Walker-delta shell spreads `num_planes` circular orbital planes evenly
//! over 360 degrees of right ascension, with `sats_per_plane` satellites
//! evenly phased within each plane and an optional integer phasing factor
//! staggering the anomaly between adjacent planes. Satellites move at the
//! circular Keplerian rate for their altitude; ground stations stay fixed in
//! the Earth frame, and satellite positions are rotated into that frame, so a
//! snapshot at time `t` is directly comparable against station positions.

use serde::{Deserialize, Serialize};

use crate::geo::{self, Cartesian3, EarthModel, GeodeticPoint};

/// Earth sidereal rotation rate, rad/s.
pub const EARTH_ROTATION_RAD_PER_S: f64 = 7.292_115_9e-5;

/// Shape of a Walker-delta shell. The default matches a 1,584-satellite
/// LEO constellation: 24 planes of 66 satellites at 53 degrees inclination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WalkerConfig {
    pub num_planes: u32,
    pub sats_per_plane: u32,
    pub inclination_deg: f64,
    pub altitude_km: f64,
    /// Walker phasing factor F in [0, num_planes): adjacent planes are offset
    /// in anomaly by F * 360 / (num_planes * sats_per_plane) degrees.
    pub phasing_factor: u32,
    /// Right-ascension span the planes are spread over; 360 for a delta shell.
    pub raan_span_deg: f64,
    /// Simulation epoch offset, seconds. A nonzero value starts the
    /// constellation (and Earth rotation) that far into the motion.
    pub epoch_offset_s: f64,
}

impl Default for WalkerConfig {
    fn default() -> Self {
        Self {
            num_planes: 24,
            sats_per_plane: 66,
            inclination_deg: 53.0,
            altitude_km: 550.0,
            phasing_factor: 0,
            raan_span_deg: 360.0,
            epoch_offset_s: 0.0,
        }
    }
}

impl WalkerConfig {
    pub fn total_satellites(&self) -> u32 {
        self.num_planes * self.sats_per_plane
    }

    pub fn validate(&self) -> Result<(), ConstellationError> {
        if self.num_planes == 0 || self.sats_per_plane == 0 {
            return Err(ConstellationError::EmptyShell);
        }
        if !(self.inclination_deg > 0.0 && self.inclination_deg < 180.0) {
            return Err(ConstellationError::InvalidConfig(format!(
                "inclination must lie in (0, 180), got {}",
                self.inclination_deg
            )));
        }
        if !(self.altitude_km > 0.0) {
            return Err(ConstellationError::InvalidConfig(format!(
                "altitude must be positive, got {}",
                self.altitude_km
            )));
        }
        if self.phasing_factor >= self.num_planes {
            return Err(ConstellationError::InvalidConfig(format!(
                "phasing factor {} must be below the plane count {}",
                self.phasing_factor, self.num_planes
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ConstellationError {
    #[error("constellation must have at least one plane and one satellite per plane")]
    EmptyShell,
    #[error("invalid constellation config: {0}")]
    InvalidConfig(String),
}

/// Identity of a satellite by plane and in-plane slot, rendered "p<plane>s<slot>".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SatelliteId {
    pub plane: u16,
    pub slot: u16,
}

impl std::fmt::Display for SatelliteId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p{}s{}", self.plane, self.slot)
    }
}

/// Fixed orbital elements of one satellite in a circular shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalElements {
    pub id: SatelliteId,
    /// Right ascension of the ascending node, degrees.
    pub raan_deg: f64,
    /// Argument of latitude at epoch, degrees.
    pub anomaly_deg: f64,
}

/// Snapshot position of one satellite in the Earth-fixed frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteState {
    pub id: SatelliteId,
    pub position_ecef: Cartesian3,
}

/// Lays out the shell: plane p gets RAAN p * (raan_span / num_planes); slot s
/// in plane p starts at anomaly s * (360 / sats_per_plane) + p * F * 360 /
/// (num_planes * sats_per_plane).
pub fn generate_walker(config: &WalkerConfig) -> Result<Vec<OrbitalElements>, ConstellationError> {
    config.validate()?;
    let plane_spacing = config.raan_span_deg / f64::from(config.num_planes);
    let slot_spacing = 360.0 / f64::from(config.sats_per_plane);
    let phase_step =
        360.0 * f64::from(config.phasing_factor) / f64::from(config.total_satellites());
    let mut elements = Vec::with_capacity(config.total_satellites() as usize);
    for plane in 0..config.num_planes {
        let raan_deg = f64::from(plane) * plane_spacing;
        let plane_phase = f64::from(plane) * phase_step;
        for slot in 0..config.sats_per_plane {
            elements.push(OrbitalElements {
                id: SatelliteId { plane: plane as u16, slot: slot as u16 },
                raan_deg,
                anomaly_deg: (f64::from(slot) * slot_spacing + plane_phase) % 360.0,
            });
        }
    }
    Ok(elements)
}

/// Circular orbital speed sqrt(G * M / (R + h)), km/s.
pub fn orbital_velocity_km_s(altitude_km: f64, earth: &EarthModel) -> f64 {
    let r_m = (earth.radius_km + altitude_km) * 1000.0;
    (earth.gravitational_constant * earth.earth_mass_kg / r_m).sqrt() / 1000.0
}

/// Circular orbital period 2*pi*(R+h)/v, seconds.
pub fn orbital_period_s(altitude_km: f64, earth: &EarthModel) -> f64 {
    let r = earth.radius_km + altitude_km;
    2.0 * std::f64::consts::PI * r / orbital_velocity_km_s(altitude_km, earth)
}

/// Positions of the whole shell at simulation time `t_s`, in the Earth-fixed
/// frame. Time `t_s` is measured from the configured epoch offset.
pub fn propagate(
    elements: &[OrbitalElements],
    t_s: f64,
    config: &WalkerConfig,
    earth: &EarthModel,
) -> Vec<SatelliteState> {
    let r = earth.radius_km + config.altitude_km;
    // Mean motion of a circular orbit, rad/s.
    let omega = orbital_velocity_km_s(config.altitude_km, earth) / r;
    let t = t_s + config.epoch_offset_s;
    let (sin_inc, cos_inc) = config.inclination_deg.to_radians().sin_cos();
    // Earth frame has rotated by this much since epoch zero.
    let (sin_g, cos_g) = (EARTH_ROTATION_RAD_PER_S * t).sin_cos();
    elements
        .iter()
        .map(|el| {
            let u = el.anomaly_deg.to_radians() + omega * t;
            let (sin_u, cos_u) = u.sin_cos();
            let (sin_o, cos_o) = el.raan_deg.to_radians().sin_cos();
            // Inertial position of a circular inclined orbit.
            let xi = r * (cos_o * cos_u - sin_o * sin_u * cos_inc);
            let yi = r * (sin_o * cos_u + cos_o * sin_u * cos_inc);
            let zi = r * (sin_u * sin_inc);
            // Rotate into the Earth-fixed frame.
            let position_ecef = Cartesian3::new(
                xi * cos_g + yi * sin_g,
                -xi * sin_g + yi * cos_g,
                zi,
            );
            SatelliteState { id: el.id, position_ecef }
        })
        .collect()
}

/// A ground terminal tied to a surface location, with the satellite range it
/// can close a link over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStation {
    pub name: String,
    pub location: GeodeticPoint,
    /// Maximum station-to-satellite distance, km. For a station tracking down
    /// to `min_elevation_deg` this is the slant range at that elevation.
    pub range_km: f64,
    pub min_elevation_deg: f64,
}

impl GroundStation {
    /// Builds a station whose range is the slant range of the paired shell's
    /// altitude at the station's minimum tracking elevation.
    pub fn new(
        name: impl Into<String>,
        location: GeodeticPoint,
        min_elevation_deg: f64,
        constellation_altitude_km: f64,
        earth: &EarthModel,
    ) -> Self {
        Self {
            name: name.into(),
            location,
            range_km: geo::slant_range(min_elevation_deg, constellation_altitude_km, earth),
            min_elevation_deg,
        }
    }
}

/// Earth-fixed positions of the stations; norm is the Earth radius.
pub fn station_positions(stations: &[GroundStation], earth: &EarthModel) -> Vec<Cartesian3> {
    stations.iter().map(|s| geo::geodetic_to_ecef(&s.location, earth)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn earth() -> EarthModel {
        EarthModel::default()
    }

    #[test]
    fn default_shell_has_1584_satellites_and_24_raans() {
        let cfg = WalkerConfig::default();
        let els = generate_walker(&cfg).unwrap();
        assert_eq!(els.len(), 1584);
        let mut raans: Vec<f64> = els.iter().map(|e| e.raan_deg).collect();
        raans.dedup();
        assert_eq!(raans.len(), 24);
        for w in raans.windows(2) {
            assert_abs_diff_eq!(w[1] - w[0], 15.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_plane_anomalies() {
        let cfg = WalkerConfig { num_planes: 1, sats_per_plane: 4, ..WalkerConfig::default() };
        let els = generate_walker(&cfg).unwrap();
        let anomalies: Vec<f64> = els.iter().map(|e| e.anomaly_deg).collect();
        assert_eq!(anomalies, vec![0.0, 90.0, 180.0, 270.0]);
    }

    #[test]
    fn phasing_offsets_second_plane() {
        // Hand-enumerated Walker pattern: 2 planes x 2 slots, F = 1 shifts
        // plane 1 by 360/(2*2) = 90 degrees.
        let cfg = WalkerConfig {
            num_planes: 2,
            sats_per_plane: 2,
            phasing_factor: 1,
            ..WalkerConfig::default()
        };
        let els = generate_walker(&cfg).unwrap();
        let anomalies: Vec<f64> = els.iter().map(|e| e.anomaly_deg).collect();
        assert_eq!(anomalies, vec![0.0, 180.0, 90.0, 270.0]);
    }

    #[test]
    fn zero_planes_rejected() {
        let cfg = WalkerConfig { num_planes: 0, ..WalkerConfig::default() };
        assert!(generate_walker(&cfg).is_err());
        let cfg = WalkerConfig { sats_per_plane: 0, ..WalkerConfig::default() };
        assert!(generate_walker(&cfg).is_err());
    }

    #[test]
    fn orbital_velocities_match_reference() {
        let e = earth();
        assert!((orbital_velocity_km_s(300.0, &e) - 7.7).abs() < 0.05);
        assert!((orbital_velocity_km_s(550.0, &e) - 7.6).abs() < 0.05);
        assert!((orbital_velocity_km_s(1100.0, &e) - 7.3).abs() < 0.05);
    }

    #[test]
    fn period_agrees_with_kepler() {
        // Independent oracle: Kepler's third law, T = sqrt(4 pi^2 a^3 / GM).
        let e = earth();
        for h in [300.0, 550.0, 1100.0] {
            let a_m = (e.radius_km + h) * 1000.0;
            let kepler = (4.0 * std::f64::consts::PI.powi(2) * a_m.powi(3)
                / (e.gravitational_constant * e.earth_mass_kg))
                .sqrt();
            assert_relative_eq!(orbital_period_s(h, &e), kepler, max_relative = 1e-12);
        }
        assert!((orbital_period_s(550.0, &earth()) - 5735.6).abs() < 1.0);
    }

    #[test]
    fn propagation_starts_at_generated_geometry() {
        let cfg = WalkerConfig::default();
        let els = generate_walker(&cfg).unwrap();
        let states = propagate(&els, 0.0, &cfg, &earth());
        // p0s0 starts at anomaly 0, RAAN 0: on the equatorial x axis.
        let p = states[0].position_ecef;
        assert_relative_eq!(p.x, 6378.0 + 550.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn norm_is_conserved() {
        let cfg = WalkerConfig::default();
        let els = generate_walker(&cfg).unwrap();
        let r = 6378.0 + cfg.altitude_km;
        for t in [0.0, 17.0, 600.0, 3599.0] {
            for s in propagate(&els, t, &cfg, &earth()) {
                assert!((s.position_ecef.norm() - r).abs() / r <= 1e-6);
            }
        }
    }

    #[test]
    fn inertial_position_repeats_after_one_period() {
        let cfg = WalkerConfig::default();
        let els = generate_walker(&cfg).unwrap();
        let e = earth();
        let period = orbital_period_s(cfg.altitude_km, &e);
        let start = propagate(&els, 0.0, &cfg, &e);
        let after = propagate(&els, period, &cfg, &e);
        // Undo Earth rotation to compare in the inertial frame.
        let g = EARTH_ROTATION_RAD_PER_S * period;
        let (sin_g, cos_g) = g.sin_cos();
        for (a, b) in start.iter().zip(&after) {
            let bi = Cartesian3::new(
                b.position_ecef.x * cos_g - b.position_ecef.y * sin_g,
                b.position_ecef.x * sin_g + b.position_ecef.y * cos_g,
                b.position_ecef.z,
            );
            assert!(a.position_ecef.distance(&bi) < 1e-6, "{} drifted", a.id);
        }
    }

    #[test]
    fn ground_track_latitude_bounded_by_inclination() {
        let cfg = WalkerConfig::default();
        let els = generate_walker(&cfg).unwrap();
        let r = 6378.0 + cfg.altitude_km;
        let max_sin = cfg.inclination_deg.to_radians().sin() + 1e-12;
        for t in [0.0, 123.0, 1800.0, 3600.0] {
            for s in propagate(&els, t, &cfg, &earth()) {
                assert!(s.position_ecef.z.abs() / r <= max_sin);
            }
        }
    }

    #[test]
    fn in_plane_spacing_rigid_over_time() {
        let cfg = WalkerConfig::default();
        let els = generate_walker(&cfg).unwrap();
        let e = earth();
        let spacing_at = |t: f64| {
            let states = propagate(&els, t, &cfg, &e);
            states[0].position_ecef.distance(&states[1].position_ecef)
        };
        let d0 = spacing_at(0.0);
        for t in [60.0, 1234.0, 3000.0] {
            assert_relative_eq!(spacing_at(t), d0, max_relative = 1e-9);
        }
    }

    #[test]
    fn epoch_offset_shifts_time_origin() {
        let cfg = WalkerConfig::default();
        let shifted = WalkerConfig { epoch_offset_s: 250.0, ..cfg };
        let els = generate_walker(&cfg).unwrap();
        let e = earth();
        let a = propagate(&els, 250.0, &cfg, &e);
        let b = propagate(&els, 0.0, &shifted, &e);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.position_ecef.distance(&y.position_ecef) < 1e-9);
        }
    }

    #[test]
    fn station_positions_on_axes() {
        let e = earth();
        let equator = GroundStation::new(
            "equator",
            GeodeticPoint::new(0.0, 0.0).unwrap(),
            25.0,
            550.0,
            &e,
        );
        let pole =
            GroundStation::new("pole", GeodeticPoint::new(90.0, 0.0).unwrap(), 25.0, 550.0, &e);
        let pos = station_positions(&[equator.clone(), pole], &e);
        assert_relative_eq!(pos[0].x, 6378.0, epsilon = 1e-9);
        assert_relative_eq!(pos[1].z, 6378.0, epsilon = 1e-9);
        // Station range comes from the slant-range geometry.
        assert!((equator.range_km - 1123.0).abs() < 1.0);
    }
}
