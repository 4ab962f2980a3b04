//! Fiber-vs-satellite latency comparison: the report generator.
//!
//! A comparison runs every connection over every configured fiber network
//! (analytic: great-circle distance at the fiber light speed) and every
//! configured satellite network (simulated: mean shortest-path latency over
//! the run), then derives improvement percentages and an advisory crossover
//! verdict per network pairing.

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogError, CityCatalog};
use crate::constellation::{GroundStation, WalkerConfig};
use crate::crossover::{self, CrossoverError};
use crate::geo::{self, EarthModel};
use crate::linkgraph::{self, SimulationSpec, SlotSeries};

/// A terrestrial fiber network: a refractive index and an optional detour
/// surcharge modelling the zig-zag of real cable routes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OftnConfig {
    pub name: String,
    pub refractive_index: f64,
    #[serde(default)]
    pub delta_zigzag: f64,
}

impl OftnConfig {
    pub fn validate(&self) -> Result<(), CompareError> {
        if !(self.refractive_index >= 1.0) {
            return Err(CompareError::InvalidConfig(format!(
                "{}: refractive index must be >= 1",
                self.name
            )));
        }
        if !(self.delta_zigzag >= 0.0) {
            return Err(CompareError::InvalidConfig(format!(
                "{}: zig-zag delta must be non-negative",
                self.name
            )));
        }
        Ok(())
    }
}

/// A laser-linked satellite network: shell altitude, laser link range, and
/// the ground-station geometry derived from the minimum tracking elevation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OwsnConfig {
    pub name: String,
    pub altitude_km: f64,
    pub lisl_range_km: f64,
    /// Ground-station range; equals the slant range at `min_elevation_deg`.
    pub gs_range_km: f64,
    pub min_elevation_deg: f64,
}

impl OwsnConfig {
    /// Derives the ground-station range from the elevation mask and verifies
    /// the laser range against the visibility maximum.
    pub fn new(
        name: impl Into<String>,
        altitude_km: f64,
        lisl_range_km: f64,
        min_elevation_deg: f64,
        earth: &EarthModel,
    ) -> Result<Self, CompareError> {
        let name = name.into();
        let max_range = geo::max_lisl_range(altitude_km, earth)
            .map_err(|e| CompareError::InvalidConfig(format!("{name}: {e}")))?;
        if !(lisl_range_km > 0.0) || lisl_range_km > max_range {
            return Err(CompareError::InvalidConfig(format!(
                "{name}: laser range {lisl_range_km} km outside (0, {max_range:.0}] km"
            )));
        }
        let gs_range_km = geo::slant_range(min_elevation_deg, altitude_km, earth);
        Ok(Self { name, altitude_km, lisl_range_km, gs_range_km, min_elevation_deg })
    }
}

/// A named city pair. The terrestrial distance defaults to the catalog
/// great-circle value; an override pins it to a published figure so fiber
/// cells match reference tables regardless of coordinate precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionScenario {
    pub name: String,
    pub city_a: String,
    pub city_b: String,
    #[serde(default)]
    pub terrestrial_distance_km: Option<f64>,
}

impl ConnectionScenario {
    pub fn resolve_distance_km(
        &self,
        catalog: &CityCatalog,
        earth: &EarthModel,
    ) -> Result<f64, CatalogError> {
        match self.terrestrial_distance_km {
            Some(d) => Ok(d),
            None => catalog.surface_distance_km(&self.city_a, &self.city_b, earth),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CompareError {
    #[error("invalid comparison config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Crossover(#[from] CrossoverError),
}

/// Fiber latency for a surface distance: d * (1 + delta) * i / c, in ms.
pub fn oftn_latency_ms(distance_km: f64, cfg: &OftnConfig, earth: &EarthModel) -> f64 {
    debug_assert!(distance_km >= 0.0);
    earth.vacuum_latency_s(distance_km * (1.0 + cfg.delta_zigzag)) * cfg.refractive_index * 1000.0
}

/// Latency improvement of the satellite path over the fiber path, percent.
/// Negative when the satellite path loses.
pub fn improvement_percent(t_oftn_ms: f64, t_owsn_ms: f64) -> f64 {
    (t_oftn_ms - t_owsn_ms) / t_oftn_ms * 100.0
}

/// Which network the average-crossover rule prefers for a given distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossoverVerdict {
    PreferOwsn,
    PreferOftn,
}

impl std::fmt::Display for CrossoverVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CrossoverVerdict::PreferOwsn => write!(f, "prefer-owsn"),
            CrossoverVerdict::PreferOftn => write!(f, "prefer-oftn"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: CrossoverVerdict,
    pub average_crossover_km: f64,
}

/// Applies the crossover rule: hand traffic to the satellite network exactly
/// when the terrestrial distance exceeds the average crossover distance for
/// (h, i). The verdict is advisory; multi-hop detours in a real shell can
/// overturn it, which the comparison report surfaces per cell.
pub fn crossover_verdict(
    terrestrial_distance_km: f64,
    altitude_km: f64,
    refractive_index: f64,
    earth: &EarthModel,
) -> Result<VerdictReport, CrossoverError> {
    let row = crossover::average_crossover(altitude_km, refractive_index, earth)?;
    let average_crossover_km =
        row.average_distance_km.expect("average_crossover guarantees a full row");
    let verdict = if terrestrial_distance_km > average_crossover_km {
        CrossoverVerdict::PreferOwsn
    } else {
        CrossoverVerdict::PreferOftn
    };
    Ok(VerdictReport { verdict, average_crossover_km })
}

/// Constellation shape and run length shared by every simulated cell; the
/// per-network altitude overrides the base config's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSetup {
    pub walker_base: WalkerConfig,
    pub duration_s: u32,
    pub dt_s: u32,
}

impl Default for ComparisonSetup {
    fn default() -> Self {
        Self { walker_base: WalkerConfig::default(), duration_s: 3600, dt_s: 1 }
    }
}

/// One simulated satellite-network cell of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OwsnCell {
    pub owsn: String,
    pub mean_latency_ms: Option<f64>,
    pub unreachable_count: u32,
    pub lisl_histogram: std::collections::BTreeMap<u32, u32>,
    /// Present when the simulation for this cell failed.
    pub error: Option<String>,
}

/// One satellite-vs-fiber pairing within a connection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub owsn: String,
    pub oftn: String,
    pub improvement_percent: Option<f64>,
    pub verdict: Option<VerdictReport>,
    /// Whether the simulation outcome matches the advisory verdict; `None`
    /// when either side is unavailable.
    pub simulation_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionRow {
    pub connection: String,
    pub city_a: String,
    pub city_b: String,
    pub terrestrial_distance_km: f64,
    /// Fiber latencies, one per configured fiber network, ms.
    pub oftn_latency_ms: Vec<f64>,
    pub owsn_cells: Vec<OwsnCell>,
    pub pairings: Vec<PairingResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub oftn_names: Vec<String>,
    pub owsn_names: Vec<String>,
    pub rows: Vec<ConnectionRow>,
    /// Count of failed cells or verdicts; the report stays renderable.
    pub warning_count: u32,
}

/// Runs the full comparison matrix. Simulator failures mark their cell and
/// increment the warning count instead of aborting the report.
pub fn run_comparison(
    connections: &[ConnectionScenario],
    oftns: &[OftnConfig],
    owsns: &[OwsnConfig],
    setup: &ComparisonSetup,
    catalog: &CityCatalog,
    earth: &EarthModel,
) -> Result<ComparisonReport, CompareError> {
    for o in oftns {
        o.validate()?;
    }
    let mut warning_count = 0u32;
    let mut rows = Vec::with_capacity(connections.len());
    for conn in connections {
        let distance_km = conn.resolve_distance_km(catalog, earth)?;
        if !(distance_km > 0.0) {
            return Err(CompareError::InvalidConfig(format!(
                "{}: terrestrial distance must be positive",
                conn.name
            )));
        }
        let oftn_latency: Vec<f64> =
            oftns.iter().map(|o| oftn_latency_ms(distance_km, o, earth)).collect();

        let mut owsn_cells = Vec::with_capacity(owsns.len());
        for owsn in owsns {
            owsn_cells.push(simulate_cell(conn, owsn, setup, catalog, earth));
            if owsn_cells.last().unwrap().error.is_some() {
                warning_count += 1;
            }
        }

        let mut pairings = Vec::new();
        for (oi, owsn) in owsns.iter().enumerate() {
            for (fi, oftn) in oftns.iter().enumerate() {
                let sim_ms = owsn_cells[oi].mean_latency_ms;
                let improvement =
                    sim_ms.map(|ms| improvement_percent(oftn_latency[fi], ms));
                let verdict = match crossover_verdict(
                    distance_km,
                    owsn.altitude_km,
                    oftn.refractive_index,
                    earth,
                ) {
                    Ok(v) => Some(v),
                    Err(_) => {
                        warning_count += 1;
                        None
                    }
                };
                let simulation_agrees = match (verdict.as_ref(), sim_ms) {
                    (Some(v), Some(ms)) => {
                        let owsn_wins = ms < oftn_latency[fi];
                        Some((v.verdict == CrossoverVerdict::PreferOwsn) == owsn_wins)
                    }
                    _ => None,
                };
                pairings.push(PairingResult {
                    owsn: owsn.name.clone(),
                    oftn: oftn.name.clone(),
                    improvement_percent: improvement,
                    verdict,
                    simulation_agrees,
                });
            }
        }

        rows.push(ConnectionRow {
            connection: conn.name.clone(),
            city_a: conn.city_a.clone(),
            city_b: conn.city_b.clone(),
            terrestrial_distance_km: distance_km,
            oftn_latency_ms: oftn_latency,
            owsn_cells,
            pairings,
        });
    }
    Ok(ComparisonReport {
        oftn_names: oftns.iter().map(|o| o.name.clone()).collect(),
        owsn_names: owsns.iter().map(|o| o.name.clone()).collect(),
        rows,
        warning_count,
    })
}

/// Builds the simulation spec for one (connection, network) cell and runs it.
pub fn simulation_spec_for(
    conn: &ConnectionScenario,
    owsn: &OwsnConfig,
    setup: &ComparisonSetup,
    catalog: &CityCatalog,
) -> Result<SimulationSpec, CatalogError> {
    let a = catalog.get(&conn.city_a)?;
    let b = catalog.get(&conn.city_b)?;
    let station = |name: &str, loc| GroundStation {
        name: name.to_string(),
        location: loc,
        range_km: owsn.gs_range_km,
        min_elevation_deg: owsn.min_elevation_deg,
    };
    Ok(SimulationSpec {
        walker: WalkerConfig { altitude_km: owsn.altitude_km, ..setup.walker_base },
        lisl_range_km: owsn.lisl_range_km,
        stations: [station(&conn.city_a, a), station(&conn.city_b, b)],
        duration_s: setup.duration_s,
        dt_s: setup.dt_s,
    })
}

fn simulate_cell(
    conn: &ConnectionScenario,
    owsn: &OwsnConfig,
    setup: &ComparisonSetup,
    catalog: &CityCatalog,
    earth: &EarthModel,
) -> OwsnCell {
    let run: Result<SlotSeries, String> = simulation_spec_for(conn, owsn, setup, catalog)
        .map_err(|e| e.to_string())
        .and_then(|spec| linkgraph::simulate_connection(&spec, earth).map_err(|e| e.to_string()));
    match run {
        Ok(series) => OwsnCell {
            owsn: owsn.name.clone(),
            mean_latency_ms: series.mean_latency_ms,
            unreachable_count: series.unreachable_count,
            lisl_histogram: series.lisl_histogram,
            error: None,
        },
        Err(e) => OwsnCell {
            owsn: owsn.name.clone(),
            mean_latency_ms: None,
            unreachable_count: 0,
            lisl_histogram: Default::default(),
            error: Some(e),
        },
    }
}
