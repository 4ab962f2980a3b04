//! City catalog: named surface locations for connection endpoints.
//!
//! The bundled catalog carries the six stock-exchange sites used by the
//! reference experiments. Loading it validates that the three reference
//! connection distances (New York-Dublin 5,121 km, Sao Paulo-London 9,514 km,
//! Toronto-Sydney 15,585 km) are reproduced within 1%, which guards the
//! coordinates against silent edits.

use std::collections::BTreeMap;
use std::path::Path;

use crate::geo::{self, EarthModel, GeodeticPoint};

const BUNDLED: &str = include_str!("../data/catalog.toml");

/// Reference great-circle distances validated at load time: (a, b, km).
const REFERENCE_DISTANCES: [(&str, &str, f64); 3] = [
    ("new-york", "dublin", 5121.0),
    ("sao-paulo", "london", 9514.0),
    ("toronto", "sydney", 15585.0),
];

#[derive(Debug, Clone, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("catalog entry {name}: {source}")]
    BadEntry {
        name: String,
        #[source]
        source: geo::GeoError,
    },
    #[error("unknown city {0:?}")]
    UnknownCity(String),
    #[error(
        "bundled catalog failed distance validation: {a}-{b} computed {computed_km:.1} km, \
         expected {expected_km} km"
    )]
    DistanceValidation { a: String, b: String, computed_km: f64, expected_km: f64 },
    #[error("could not read catalog: {0}")]
    Io(String),
}

/// Name-to-location map with unique, sorted keys.
#[derive(Debug, Clone, PartialEq)]
pub struct CityCatalog {
    entries: BTreeMap<String, GeodeticPoint>,
}

impl CityCatalog {
    /// The compiled-in default catalog, distance-validated against the
    /// reference connections.
    pub fn bundled(earth: &EarthModel) -> Result<Self, CatalogError> {
        let catalog = Self::from_toml_str(BUNDLED)?;
        for (a, b, expected_km) in REFERENCE_DISTANCES {
            let computed_km = catalog.surface_distance_km(a, b, earth)?;
            if (computed_km - expected_km).abs() / expected_km > 0.01 {
                return Err(CatalogError::DistanceValidation {
                    a: a.into(),
                    b: b.into(),
                    computed_km,
                    expected_km,
                });
            }
        }
        Ok(catalog)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, CatalogError> {
        #[derive(serde::Deserialize)]
        struct RawEntry {
            lat_deg: f64,
            lon_deg: f64,
        }
        let raw: BTreeMap<String, RawEntry> =
            toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for (name, e) in raw {
            let point = GeodeticPoint::new(e.lat_deg, e.lon_deg)
                .map_err(|source| CatalogError::BadEntry { name: name.clone(), source })?;
            entries.insert(name, point);
        }
        Ok(Self { entries })
    }

    pub fn from_path(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io(e.to_string()))?;
        Self::from_toml_str(&text)
    }

    pub fn get(&self, name: &str) -> Result<GeodeticPoint, CatalogError> {
        self.entries.get(name).copied().ok_or_else(|| CatalogError::UnknownCity(name.into()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Great-circle surface distance between two catalog cities, km.
    pub fn surface_distance_km(
        &self,
        a: &str,
        b: &str,
        earth: &EarthModel,
    ) -> Result<f64, CatalogError> {
        let pa = self.get(a)?;
        let pb = self.get(b)?;
        Ok(geo::arc_length(geo::central_angle(&pa, &pb), earth))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog_validates() {
        let c = CityCatalog::bundled(&EarthModel::default()).unwrap();
        assert_eq!(c.len(), 6);
        assert!(c.get("toronto").is_ok());
        assert!(matches!(c.get("atlantis"), Err(CatalogError::UnknownCity(_))));
    }

    #[test]
    fn reference_distances_within_one_percent() {
        let e = EarthModel::default();
        let c = CityCatalog::bundled(&e).unwrap();
        for (a, b, expected) in REFERENCE_DISTANCES {
            let d = c.surface_distance_km(a, b, &e).unwrap();
            assert!((d - expected).abs() / expected < 0.01, "{a}-{b}: {d}");
        }
    }

    #[test]
    fn bad_coordinates_rejected() {
        let err = CityCatalog::from_toml_str("[x]\nlat_deg = 95.0\nlon_deg = 0.0\n");
        assert!(matches!(err, Err(CatalogError::BadEntry { .. })));
    }

    #[test]
    fn duplicate_keys_rejected_by_parser() {
        let text = "[x]\nlat_deg = 1.0\nlon_deg = 2.0\n[x]\nlat_deg = 3.0\nlon_deg = 4.0\n";
        assert!(matches!(CityCatalog::from_toml_str(text), Err(CatalogError::Parse(_))));
    }
}
