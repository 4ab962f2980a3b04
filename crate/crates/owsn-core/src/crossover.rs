//! The crossover-function family and its root solver.
//!
//! The crossover function compares end-to-end latency over a laser-linked
//! satellite shell against latency over surface fiber, as a function of the
//! central angle `theta` separating the two endpoints. It is the ratio
//!
//! ```text
//! f(theta) = owsn_distance(theta) / (arc_length(theta) * i)
//! ```
//!
//! where `i` is the fiber refractive index. The function decreases
//! monotonically in `theta`; the angle where it reaches 1 is the crossover
//! angle, and the surface arc at that angle is the crossover distance: beyond
//! it, the satellite path wins on latency.
//!
//! Four scenarios model how far the ingress/egress satellites sit from the
//! ideal positions directly over the endpoints:
//!
//! * `S1` - satellites exactly overhead (elevation 90 degrees);
//! * `S2` - both satellites displaced outward (worst case, adds two offsets);
//! * `S3` - both displaced inward (best case, subtracts two offsets);
//! * `S4` - one in, one out (the two offsets cancel).
//!
//! A per-slot variant generalizes `S2` to distinct ingress/egress elevation
//! angles and an optional fiber zig-zag surcharge, for making the crossover
//! decision against a live constellation snapshot.

use serde::{Deserialize, Serialize};

use crate::exec::{self, ExecMode};
use crate::geo::{self, EarthModel};

/// Minimum elevation angle (degrees) at which ground stations track
/// satellites; used for scenarios S2-S4 and the reference tables.
pub const DEFAULT_MIN_ELEVATION_DEG: f64 = 25.0;

/// Solver bracket lower edge; the ratio diverges at zero separation.
const THETA_LO_DEG: f64 = 1e-6;
/// Solver bracket upper edge. Crossover angles above 180 degrees occur at
/// high altitude and low refractive index, so the bracket spans a full turn.
const THETA_HI_DEG: f64 = 360.0;
/// Bisection terminates when the bracket is narrower than this, degrees.
const THETA_TOL_DEG: f64 = 1e-7;

/// Ingress/egress displacement scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    S1,
    S2,
    S3,
    S4,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::S1, Scenario::S2, Scenario::S3, Scenario::S4];

    pub fn index(self) -> usize {
        match self {
            Scenario::S1 => 0,
            Scenario::S2 => 1,
            Scenario::S3 => 2,
            Scenario::S4 => 3,
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CrossoverError {
    #[error("invalid crossover query: {0}")]
    InvalidQuery(String),
    #[error(
        "no crossover: satellite path never undercuts fiber for h={altitude_km} km, \
         i={refractive_index} ({scenario})"
    )]
    NoCrossover { altitude_km: f64, refractive_index: f64, scenario: Scenario },
}

/// Inputs of one crossover evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverQuery {
    /// Satellite altitude h, km.
    pub altitude_km: f64,
    /// Fiber refractive index i.
    pub refractive_index: f64,
    /// Elevation angle of the ingress/egress satellites, degrees.
    /// Forced to 90 for `S1`.
    pub elevation_deg: f64,
    pub scenario: Scenario,
    pub earth: EarthModel,
}

impl CrossoverQuery {
    pub fn new(
        altitude_km: f64,
        refractive_index: f64,
        elevation_deg: f64,
        scenario: Scenario,
        earth: EarthModel,
    ) -> Result<Self, CrossoverError> {
        if !(altitude_km > 0.0) {
            return Err(CrossoverError::InvalidQuery(format!(
                "altitude must be positive, got {altitude_km}"
            )));
        }
        if !(refractive_index >= 1.0) {
            return Err(CrossoverError::InvalidQuery(format!(
                "refractive index must be >= 1, got {refractive_index}"
            )));
        }
        if !(0.0..=90.0).contains(&elevation_deg) {
            return Err(CrossoverError::InvalidQuery(format!(
                "elevation must lie in [0, 90], got {elevation_deg}"
            )));
        }
        earth.validate().map_err(|e| CrossoverError::InvalidQuery(e.to_string()))?;
        let elevation_deg = if scenario == Scenario::S1 { 90.0 } else { elevation_deg };
        Ok(Self { altitude_km, refractive_index, elevation_deg, scenario, earth })
    }

    /// Ground-station range r_gs implied by the query's elevation angle.
    /// Equals the altitude for `S1`.
    pub fn gs_range_km(&self) -> f64 {
        if self.scenario == Scenario::S1 {
            self.altitude_km
        } else {
            geo::slant_range(self.elevation_deg, self.altitude_km, &self.earth)
        }
    }
}

/// A solved crossover point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    /// Angle at which the latency ratio equals 1, degrees.
    pub theta_crossover_deg: f64,
    /// Surface arc at the crossover angle, km.
    pub distance_crossover_km: f64,
    /// Ground-station range used by the query, km.
    pub gs_range_km: f64,
}

/// End-to-end satellite-path propagation distance at separation `theta_deg`, km.
///
/// Per scenario, with `chord` the straight line between the ideal overhead
/// satellite positions and `off` the Law-of-Cosines displacement of a
/// satellite at the query's elevation from the overhead position:
///
/// * `S1`: `2h + chord`
/// * `S2`: `2 r_gs + chord + 2 off`
/// * `S3`: `2 r_gs + chord - 2 off`
/// * `S4`: `2 r_gs + chord` (the two displacements cancel)
pub fn owsn_distance(theta_deg: f64, query: &CrossoverQuery) -> f64 {
    let chord = geo::chord_length(theta_deg, query.altitude_km, &query.earth);
    match query.scenario {
        Scenario::S1 => 2.0 * query.altitude_km + chord,
        Scenario::S2 | Scenario::S3 | Scenario::S4 => {
            let rgs = query.gs_range_km();
            let base = 2.0 * rgs + chord;
            match query.scenario {
                Scenario::S4 => base,
                s => {
                    let alpha = 90.0 - query.elevation_deg;
                    let off = geo::cosine_offset(query.altitude_km, rgs, alpha);
                    if s == Scenario::S2 {
                        base + 2.0 * off
                    } else {
                        base - 2.0 * off
                    }
                }
            }
        }
    }
}

/// Latency ratio satellite-path / fiber-path at separation `theta_deg`.
///
/// Values above 1 mean fiber wins at that separation; below 1 the satellite
/// network wins. Panics at `theta_deg <= 0`, where the surface arc vanishes.
pub fn crossover_function(theta_deg: f64, query: &CrossoverQuery) -> f64 {
    assert!(theta_deg > 0.0, "crossover function undefined at theta <= 0");
    owsn_distance(theta_deg, query)
        / (geo::arc_length(theta_deg, &query.earth) * query.refractive_index)
}

fn bisect_ratio_to_one<F: Fn(f64) -> f64>(f: F) -> Option<(f64, f64)> {
    let f_lo = f(THETA_LO_DEG);
    debug_assert!(f_lo > 1.0, "ratio must exceed 1 near zero separation, got {f_lo}");
    if f(THETA_HI_DEG) > 1.0 {
        return None;
    }
    let (mut lo, mut hi) = (THETA_LO_DEG, THETA_HI_DEG);
    while hi - lo > THETA_TOL_DEG {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

/// Finds the angle where the crossover function equals 1.
///
/// The function is monotone decreasing, so plain bisection over
/// (1e-6, 360] degrees is robust; the bracket is narrowed to 1e-7 degrees.
/// Returns [`CrossoverError::NoCrossover`] when the ratio is still above 1 at
/// 360 degrees, i.e. the satellite path never wins at this altitude/index.
pub fn solve_crossover(query: &CrossoverQuery) -> Result<CrossoverResult, CrossoverError> {
    let (lo, hi) =
        bisect_ratio_to_one(|t| crossover_function(t, query)).ok_or(CrossoverError::NoCrossover {
            altitude_km: query.altitude_km,
            refractive_index: query.refractive_index,
            scenario: query.scenario,
        })?;
    let theta = 0.5 * (lo + hi);
    Ok(CrossoverResult {
        theta_crossover_deg: theta,
        distance_crossover_km: geo::arc_length(theta, &query.earth),
        gs_range_km: query.gs_range_km(),
    })
}

/// Inputs of the per-slot crossover variant: a Scenario-2 style query with
/// independent ingress/egress elevation angles and an optional fiber detour
/// fraction `zigzag_delta` (0.1 models 10% extra cable length).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerSlotCrossoverQuery {
    pub base: CrossoverQuery,
    pub ingress_elevation_deg: f64,
    pub egress_elevation_deg: f64,
    pub zigzag_delta: f64,
}

impl PerSlotCrossoverQuery {
    pub fn new(
        base: CrossoverQuery,
        ingress_elevation_deg: f64,
        egress_elevation_deg: f64,
        zigzag_delta: f64,
    ) -> Result<Self, CrossoverError> {
        if base.scenario != Scenario::S2 {
            return Err(CrossoverError::InvalidQuery(
                "per-slot query builds on Scenario 2".into(),
            ));
        }
        for (label, e) in
            [("ingress", ingress_elevation_deg), ("egress", egress_elevation_deg)]
        {
            if !(0.0..=90.0).contains(&e) {
                return Err(CrossoverError::InvalidQuery(format!(
                    "{label} elevation must lie in [0, 90], got {e}"
                )));
            }
        }
        if !(zigzag_delta >= 0.0) {
            return Err(CrossoverError::InvalidQuery(format!(
                "zig-zag delta must be non-negative, got {zigzag_delta}"
            )));
        }
        Ok(Self { base, ingress_elevation_deg, egress_elevation_deg, zigzag_delta })
    }
}

/// Per-slot latency ratio with distinct ingress/egress elevation angles.
///
/// The numerator carries one slant range and one Law-of-Cosines offset per
/// endpoint; the denominator is the fiber arc scaled by `(1 + delta) * i`.
/// With equal elevations and delta 0 this reduces exactly to the Scenario-2
/// crossover function, and at 90 degrees both offsets vanish and it reduces
/// to Scenario 1.
pub fn per_slot_crossover_function(theta_deg: f64, query: &PerSlotCrossoverQuery) -> f64 {
    assert!(theta_deg > 0.0, "crossover function undefined at theta <= 0");
    let h = query.base.altitude_km;
    let earth = &query.base.earth;
    let chord = geo::chord_length(theta_deg, h, earth);
    let mut numerator = chord;
    for eps in [query.ingress_elevation_deg, query.egress_elevation_deg] {
        let rgs = geo::slant_range(eps, h, earth);
        numerator += rgs + geo::cosine_offset(h, rgs, 90.0 - eps);
    }
    let fiber = geo::arc_length(theta_deg, earth) * (1.0 + query.zigzag_delta);
    numerator / (fiber * query.base.refractive_index)
}

/// Root of the per-slot variant, solved like [`solve_crossover`].
pub fn solve_per_slot_crossover(
    query: &PerSlotCrossoverQuery,
) -> Result<CrossoverResult, CrossoverError> {
    let (lo, hi) = bisect_ratio_to_one(|t| per_slot_crossover_function(t, query)).ok_or(
        CrossoverError::NoCrossover {
            altitude_km: query.base.altitude_km,
            refractive_index: query.base.refractive_index,
            scenario: Scenario::S2,
        },
    )?;
    let theta = 0.5 * (lo + hi);
    Ok(CrossoverResult {
        theta_crossover_deg: theta,
        distance_crossover_km: geo::arc_length(theta, &query.base.earth),
        gs_range_km: geo::slant_range(query.ingress_elevation_deg, query.base.altitude_km, &query.base.earth),
    })
}

/// One row of the crossover grid: all four scenarios at a fixed (h, i).
///
/// Scenario cells are `None` where no crossover exists; the average is the
/// arithmetic mean of the four crossover distances and is only present when
/// all four solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverTableRow {
    pub altitude_km: f64,
    pub refractive_index: f64,
    /// Ground-station range used by S2-S4, km.
    pub gs_range_km: f64,
    /// Per-scenario solutions, indexed S1..S4.
    pub scenarios: [Option<CrossoverResult>; 4],
    pub average_distance_km: Option<f64>,
}

impl CrossoverTableRow {
    pub fn scenario(&self, s: Scenario) -> Option<&CrossoverResult> {
        self.scenarios[s.index()].as_ref()
    }
}

fn solve_row(
    altitude_km: f64,
    refractive_index: f64,
    elevation_deg: f64,
    earth: &EarthModel,
) -> Result<CrossoverTableRow, CrossoverError> {
    let mut scenarios = [None; 4];
    for s in Scenario::ALL {
        let q = CrossoverQuery::new(altitude_km, refractive_index, elevation_deg, s, *earth)?;
        scenarios[s.index()] = solve_crossover(&q).ok();
    }
    let average_distance_km = scenarios
        .iter()
        .map(|c| c.map(|r| r.distance_crossover_km))
        .collect::<Option<Vec<_>>>()
        .map(|d| d.iter().sum::<f64>() / d.len() as f64);
    let gs_range_km = geo::slant_range(elevation_deg, altitude_km, earth);
    Ok(CrossoverTableRow {
        altitude_km,
        refractive_index,
        gs_range_km,
        scenarios,
        average_distance_km,
    })
}

/// Average crossover distance over all four scenarios at (h, i), with S1 at
/// 90 degrees elevation and S2-S4 at the minimum tracking elevation.
///
/// This is the single number used to decide, ahead of any simulation, whether
/// a terrestrial distance is long enough to hand traffic to the satellite
/// network. Fails with [`CrossoverError::NoCrossover`] if any scenario has no
/// crossover.
pub fn average_crossover(
    altitude_km: f64,
    refractive_index: f64,
    earth: &EarthModel,
) -> Result<CrossoverTableRow, CrossoverError> {
    let row = solve_row(altitude_km, refractive_index, DEFAULT_MIN_ELEVATION_DEG, earth)?;
    if row.average_distance_km.is_none() {
        let missing = Scenario::ALL
            .into_iter()
            .find(|s| row.scenario(*s).is_none())
            .expect("some scenario must be missing");
        return Err(CrossoverError::NoCrossover {
            altitude_km,
            refractive_index,
            scenario: missing,
        });
    }
    Ok(row)
}

/// Solves the full (h, i) grid. Rows where a scenario has no crossover keep
/// `None` in that cell rather than failing the whole sweep.
pub fn emit_crossover_tables(
    h_list: &[f64],
    i_list: &[f64],
    elevation_deg: f64,
    earth: &EarthModel,
) -> Result<Vec<CrossoverTableRow>, CrossoverError> {
    emit_crossover_tables_with(h_list, i_list, elevation_deg, earth, ExecMode::default())
}

/// [`emit_crossover_tables`] with an explicit execution mode; the grid cells
/// are independent and fan out across threads in parallel mode.
pub fn emit_crossover_tables_with(
    h_list: &[f64],
    i_list: &[f64],
    elevation_deg: f64,
    earth: &EarthModel,
    mode: ExecMode,
) -> Result<Vec<CrossoverTableRow>, CrossoverError> {
    if h_list.is_empty() || i_list.is_empty() {
        return Err(CrossoverError::InvalidQuery(
            "altitude and refractive-index lists must be non-empty".into(),
        ));
    }
    let pairs: Vec<(f64, f64)> = h_list
        .iter()
        .flat_map(|&h| i_list.iter().map(move |&i| (h, i)))
        .collect();
    exec::map_indexed(pairs.len(), mode, |k| {
        let (h, i) = pairs[k];
        solve_row(h, i, elevation_deg, earth)
    })
    .into_iter()
    .collect()
}
