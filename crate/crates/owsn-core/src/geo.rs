//! Spherical-Earth and satellite-geometry primitives.
//!
//! All angles cross these APIs in degrees; conversion to radians happens
//! inside each function. Distances are kilometers throughout.

use serde::{Deserialize, Serialize};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// Earth model constants shared by every geometric computation.
///
/// The defaults are a spherical Earth of radius 6,378 km with a line-of-sight
/// grazing shell at 80 km altitude (the lowest altitude a satellite-to-satellite
/// ray may pass over without being considered obstructed by the atmosphere).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EarthModel {
    /// Earth radius, km.
    pub radius_km: f64,
    /// Altitude of the obstruction shell for satellite-to-satellite visibility, km.
    pub grazing_altitude_km: f64,
    /// Speed of light in vacuum, m/s.
    pub c_m_per_s: f64,
    /// Gravitational constant, m^3 kg^-1 s^-2.
    pub gravitational_constant: f64,
    /// Earth mass, kg.
    pub earth_mass_kg: f64,
}

impl Default for EarthModel {
    fn default() -> Self {
        Self {
            radius_km: 6378.0,
            grazing_altitude_km: 80.0,
            c_m_per_s: SPEED_OF_LIGHT_M_PER_S,
            gravitational_constant: 6.673e-11,
            earth_mass_kg: 5.98e24,
        }
    }
}

impl EarthModel {
    /// Checks the model invariants.
    pub fn validate(&self) -> Result<(), GeoError> {
        if !(self.radius_km > 0.0) {
            return Err(GeoError::InvalidEarthModel("radius_km must be positive".into()));
        }
        if !(self.grazing_altitude_km >= 0.0 && self.grazing_altitude_km < self.radius_km) {
            return Err(GeoError::InvalidEarthModel(
                "grazing_altitude_km must lie in [0, radius_km)".into(),
            ));
        }
        if !(self.c_m_per_s > 0.0) {
            return Err(GeoError::InvalidEarthModel("c_m_per_s must be positive".into()));
        }
        Ok(())
    }

    /// Propagation latency of a straight segment of `length_km`, in seconds.
    pub fn vacuum_latency_s(&self, length_km: f64) -> f64 {
        length_km * 1000.0 / self.c_m_per_s
    }
}

/// A point on the Earth's surface, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodeticPoint {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl GeodeticPoint {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self, GeoError> {
        if !(-90.0..=90.0).contains(&lat_deg) || !(-180.0..=180.0).contains(&lon_deg) {
            return Err(GeoError::InvalidCoordinates { lat_deg, lon_deg });
        }
        Ok(Self { lat_deg, lon_deg })
    }
}

/// An Earth-centered Cartesian position, km.
///
/// The frame is Earth-fixed for ground stations and whichever frame the caller
/// is working in for satellites; the operations here are frame-agnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cartesian3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Cartesian3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Cartesian3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn dot(&self, other: &Cartesian3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Cartesian3) -> Cartesian3 {
        Cartesian3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum GeoError {
    #[error("invalid Earth model: {0}")]
    InvalidEarthModel(String),
    #[error("coordinates out of range: lat {lat_deg}, lon {lon_deg}")]
    InvalidCoordinates { lat_deg: f64, lon_deg: f64 },
    #[error("altitude {altitude_km} km does not clear the grazing shell at {grazing_altitude_km} km")]
    BelowGrazingShell { altitude_km: f64, grazing_altitude_km: f64 },
}

/// Central angle between two surface points, degrees, in [0, 180].
///
/// Uses the haversine form, which stays well-conditioned for nearby points
/// where the plain arccos formulation loses digits.
pub fn central_angle(a: &GeodeticPoint, b: &GeodeticPoint) -> f64 {
    let lat_a = a.lat_deg.to_radians();
    let lat_b = b.lat_deg.to_radians();
    let dlat = lat_b - lat_a;
    let dlon = (b.lon_deg - a.lon_deg).to_radians();
    let s = (dlat / 2.0).sin().powi(2) + lat_a.cos() * lat_b.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * s.sqrt().min(1.0).asin().to_degrees()
}

/// Surface arc length spanned by a central angle of `theta_deg`: 2*pi*R*(theta/360).
pub fn arc_length(theta_deg: f64, earth: &EarthModel) -> f64 {
    2.0 * std::f64::consts::PI * earth.radius_km * (theta_deg / 360.0)
}

/// Straight-line distance between two points at `altitude_km` separated by
/// a central angle of `theta_deg`: 2*(R+h)*sin((theta/2)*(pi/180)).
pub fn chord_length(theta_deg: f64, altitude_km: f64, earth: &EarthModel) -> f64 {
    let r = earth.radius_km + altitude_km;
    2.0 * r * ((theta_deg / 2.0) * std::f64::consts::PI / 180.0).sin()
}

/// Ground-station-to-satellite distance at a given elevation angle.
///
/// This is the range at which a satellite at `altitude_km` appears at
/// elevation `elevation_deg` above the horizon; at 90 degrees it equals the
/// altitude itself.
pub fn slant_range(elevation_deg: f64, altitude_km: f64, earth: &EarthModel) -> f64 {
    let r = earth.radius_km;
    let eps = elevation_deg.to_radians();
    let ratio = (r + altitude_km) / r;
    r * ((ratio * ratio - eps.cos().powi(2)).sqrt() - eps.sin())
}

/// Law-of-Cosines distance between a satellite seen at zenith (range `altitude_km`)
/// and one seen at zenith angle `alpha_deg` (range `gs_range_km`) from the same
/// ground point: sqrt(h^2 + r_gs^2 - 2*h*r_gs*cos(alpha)).
pub fn cosine_offset(altitude_km: f64, gs_range_km: f64, alpha_deg: f64) -> f64 {
    let a = alpha_deg.to_radians();
    (altitude_km * altitude_km + gs_range_km * gs_range_km
        - 2.0 * altitude_km * gs_range_km * a.cos())
    .sqrt()
}

/// Longest satellite-to-satellite line of sight at `altitude_km` that still
/// clears the grazing shell: 2*sqrt((R+h)^2 - (R+h_graze)^2).
pub fn max_lisl_range(altitude_km: f64, earth: &EarthModel) -> Result<f64, GeoError> {
    if altitude_km <= earth.grazing_altitude_km {
        return Err(GeoError::BelowGrazingShell {
            altitude_km,
            grazing_altitude_km: earth.grazing_altitude_km,
        });
    }
    let r_orbit = earth.radius_km + altitude_km;
    let r_graze = earth.radius_km + earth.grazing_altitude_km;
    Ok(2.0 * (r_orbit * r_orbit - r_graze * r_graze).sqrt())
}

/// Spherical-Earth conversion of a surface point to Earth-fixed Cartesian.
/// The result always has norm `radius_km`.
pub fn geodetic_to_ecef(p: &GeodeticPoint, earth: &EarthModel) -> Cartesian3 {
    let lat = p.lat_deg.to_radians();
    let lon = p.lon_deg.to_radians();
    let r = earth.radius_km;
    Cartesian3::new(r * lat.cos() * lon.cos(), r * lat.cos() * lon.sin(), r * lat.sin())
}

/// True when the segment between two positions stays above the grazing shell.
///
/// Used for satellite-to-satellite visibility when a configured link range
/// exceeds the geometric maximum; for ranges at or below
/// [`max_lisl_range`] the check never rejects same-shell pairs.
pub fn line_of_sight_clear(a: &Cartesian3, b: &Cartesian3, earth: &EarthModel) -> bool {
    let shell = earth.radius_km + earth.grazing_altitude_km;
    // Closest approach of the segment to the Earth's center.
    let ab = Cartesian3::new(b.x - a.x, b.y - a.y, b.z - a.z);
    let len2 = ab.dot(&ab);
    if len2 == 0.0 {
        return a.norm() >= shell;
    }
    // Parameter of the foot of the perpendicular from the origin.
    let t = -(a.dot(&ab)) / len2;
    let closest = if t <= 0.0 {
        a.norm()
    } else if t >= 1.0 {
        b.norm()
    } else {
        Cartesian3::new(a.x + t * ab.x, a.y + t * ab.y, a.z + t * ab.z).norm()
    };
    closest >= shell
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn earth() -> EarthModel {
        EarthModel::default()
    }

    #[test]
    fn central_angle_identity_and_antipodal() {
        let p = GeodeticPoint::new(12.5, -33.0).unwrap();
        assert_abs_diff_eq!(central_angle(&p, &p), 0.0, epsilon = 1e-12);
        let a = GeodeticPoint::new(0.0, 0.0).unwrap();
        let b = GeodeticPoint::new(0.0, 180.0).unwrap();
        assert_abs_diff_eq!(central_angle(&a, &b), 180.0, epsilon = 1e-9);
    }

    #[test]
    fn central_angle_is_symmetric() {
        let a = GeodeticPoint::new(40.7069, -74.0113).unwrap();
        let b = GeodeticPoint::new(53.3441, -6.2675).unwrap();
        assert_abs_diff_eq!(central_angle(&a, &b), central_angle(&b, &a), epsilon = 1e-12);
    }

    #[test]
    fn new_york_dublin_arc_matches_reference() {
        // Exchange coordinates; the reference terrestrial distance is 5,121 km.
        let ny = GeodeticPoint::new(40.7069, -74.0113).unwrap();
        let dub = GeodeticPoint::new(53.3441, -6.2675).unwrap();
        let theta = central_angle(&ny, &dub);
        let d = arc_length(theta, &earth());
        assert!((d - 5121.0).abs() / 5121.0 < 0.01, "d = {d}");
        // Independent oracle: plain spherical law of cosines on the same inputs.
        let (la1, lo1) = (ny.lat_deg.to_radians(), ny.lon_deg.to_radians());
        let (la2, lo2) = (dub.lat_deg.to_radians(), dub.lon_deg.to_radians());
        let cosc = la1.sin() * la2.sin() + la1.cos() * la2.cos() * (lo2 - lo1).cos();
        let oracle_theta = cosc.clamp(-1.0, 1.0).acos().to_degrees();
        assert_abs_diff_eq!(theta, oracle_theta, epsilon = 1e-9);
    }

    #[test]
    fn arc_length_basics() {
        assert_eq!(arc_length(0.0, &earth()), 0.0);
        // Full circle is the circumference.
        assert_relative_eq!(arc_length(360.0, &earth()), 40074.15589, epsilon = 1e-4);
        // Reference grid row: theta 23.4533 deg -> 2,611 km.
        assert!((arc_length(23.4533, &earth()) - 2611.0).abs() < 1.0);
    }

    #[test]
    fn chord_length_basics() {
        assert_eq!(chord_length(0.0, 550.0, &earth()), 0.0);
        // Diameter at the surface.
        assert_relative_eq!(chord_length(180.0, 0.0, &earth()), 2.0 * 6378.0, epsilon = 1e-9);
        // Frozen from direct evaluation; also equals 1.5*arc(23.4533) - 2*550,
        // the value that makes the h=550, i=1.5 crossover ratio hit 1.
        assert_abs_diff_eq!(chord_length(23.4533, 550.0, &earth()), 2816.131, epsilon = 5e-3);
    }

    #[test]
    fn slant_range_reference_values() {
        let e = earth();
        assert_abs_diff_eq!(slant_range(90.0, 550.0, &e), 550.0, epsilon = 1e-9);
        assert!((slant_range(25.0, 550.0, &e) - 1123.0).abs() < 1.0);
        assert!((slant_range(25.0, 300.0, &e) - 649.0).abs() < 1.0);
        assert!((slant_range(25.0, 1100.0, &e) - 2049.0).abs() < 1.0);
    }

    #[test]
    fn slant_range_decreases_with_elevation() {
        let e = earth();
        let mut prev = slant_range(0.0, 550.0, &e);
        for eps in 1..=90 {
            let cur = slant_range(f64::from(eps), 550.0, &e);
            assert!(cur < prev, "not decreasing at {eps}");
            prev = cur;
        }
    }

    #[test]
    fn cosine_offset_degenerate_and_pythagorean() {
        assert_abs_diff_eq!(cosine_offset(550.0, 550.0, 0.0), 0.0, epsilon = 1e-9);
        let h = 550.0;
        let rgs = 1123.0;
        assert_relative_eq!(
            cosine_offset(h, rgs, 90.0),
            (h * h + rgs * rgs).sqrt(),
            epsilon = 1e-12
        );
        // Frozen from direct evaluation.
        assert_abs_diff_eq!(cosine_offset(550.0, 1123.0, 65.0), 1020.573, epsilon = 5e-3);
    }

    #[test]
    fn max_lisl_range_reference_values() {
        let e = earth();
        assert!((max_lisl_range(550.0, &e).unwrap() - 5016.0).abs() < 1.0);
        assert!((max_lisl_range(300.0, &e).unwrap() - 3400.0).abs() < 1.0);
        assert!((max_lisl_range(1100.0, &e).unwrap() - 7540.0).abs() < 1.0);
        assert!(max_lisl_range(80.0, &e).is_err());
        assert!(max_lisl_range(20.0, &e).is_err());
    }

    #[test]
    fn ecef_axes() {
        let e = earth();
        let p = geodetic_to_ecef(&GeodeticPoint::new(0.0, 0.0).unwrap(), &e);
        assert_abs_diff_eq!(p.x, 6378.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-9);
        let q = geodetic_to_ecef(&GeodeticPoint::new(90.0, 123.0).unwrap(), &e);
        assert_abs_diff_eq!(q.z, 6378.0, epsilon = 1e-9);
        assert!(q.x.abs() < 1e-9 && q.y.abs() < 1e-9);
    }

    #[test]
    fn ecef_preserves_norm() {
        let e = earth();
        let p = geodetic_to_ecef(&GeodeticPoint::new(40.7069, -74.0113).unwrap(), &e);
        assert_relative_eq!(p.norm(), 6378.0, epsilon = 1e-9);
    }

    #[test]
    fn line_of_sight_grazing() {
        let e = earth();
        let r = e.radius_km + 550.0;
        // Two satellites just inside the maximum range see each other...
        let max = max_lisl_range(550.0, &e).unwrap();
        let half = (max / 2.0 / r).asin();
        let a = Cartesian3::new(r * half.cos(), r * half.sin(), 0.0);
        let b = Cartesian3::new(r * half.cos(), -r * half.sin(), 0.0);
        assert!(a.distance(&b) <= max + 1e-6);
        assert!(line_of_sight_clear(&a, &b, &e));
        // ...while near-antipodal ones are blocked by the Earth.
        let c = Cartesian3::new(-r, 0.0, 0.0);
        let d = Cartesian3::new(r, 0.0, 0.0);
        assert!(!line_of_sight_clear(&c, &d, &e));
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(GeodeticPoint::new(91.0, 0.0).is_err());
        assert!(GeodeticPoint::new(0.0, 200.0).is_err());
        assert!(EarthModel { radius_km: -1.0, ..EarthModel::default() }.validate().is_err());
        assert!(EarthModel { grazing_altitude_km: 7000.0, ..EarthModel::default() }
            .validate()
            .is_err());
    }
}
