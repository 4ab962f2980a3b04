//! Per-slot link discovery, latency-weighted routing, and the simulation loop.
//!
//! Each one-second time slot is an independent snapshot: propagate the shell,
//! collect every feasible link (satellite-satellite links up to the laser
//! range and clear of the grazing shell, station-satellite links within the
//! station range), weight each link by its vacuum propagation latency, and
//! run Dijkstra between the two endpoint stations. A run over the full
//! duration yields the per-slot paths, their mean latency, and a histogram of
//! inter-satellite hop counts.

use std::collections::BinaryHeap;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constellation::{
    self, GroundStation, OrbitalElements, SatelliteId, SatelliteState, WalkerConfig,
};
use crate::exec::{self, ExecMode};
use crate::geo::{self, Cartesian3, EarthModel};

/// A node of the per-slot graph. Stations order before satellites, which
/// makes the graph index order coincide with `NodeId` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeId {
    Station(u16),
    Satellite(SatelliteId),
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum LinkGraphError {
    #[error("constellation snapshot is empty")]
    EmptyConstellation,
    #[error("graph needs at least two ground stations, got {0}")]
    MissingStationPair(usize),
    #[error("ranges must be positive")]
    NonPositiveRange,
    #[error("route endpoints must be two distinct stations")]
    SameStation,
    #[error("node {0} is not a station")]
    NotAStation(usize),
    #[error("no station-to-station path exists in this slot")]
    Unreachable,
}

/// Latency-weighted undirected graph over stations and satellites at one slot.
pub struct LinkGraph {
    node_ids: Vec<NodeId>,
    positions: Vec<Cartesian3>,
    /// Per node: (neighbor index, link length km). Undirected; both directions stored.
    adjacency: Vec<Vec<(u32, f64)>>,
    station_count: usize,
    edge_count: usize,
    c_m_per_s: f64,
}

impl LinkGraph {
    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn station_count(&self) -> usize {
        self.station_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn node_id(&self, index: usize) -> NodeId {
        self.node_ids[index]
    }

    pub fn position(&self, index: usize) -> Cartesian3 {
        self.positions[index]
    }

    pub fn neighbors(&self, index: usize) -> &[(u32, f64)] {
        &self.adjacency[index]
    }

    fn latency_s(&self, length_km: f64) -> f64 {
        length_km * 1000.0 / self.c_m_per_s
    }
}

/// Cube-grid spatial index used to prune the pairwise satellite distance
/// checks; candidates come from the 27 cells around a satellite's own cell,
/// which is exhaustive for a cell edge equal to the link range.
struct CubeGrid {
    cell_km: f64,
    cells: std::collections::HashMap<(i32, i32, i32), Vec<u32>>,
}

impl CubeGrid {
    fn build(positions: &[Cartesian3], cell_km: f64) -> Self {
        let mut cells: std::collections::HashMap<(i32, i32, i32), Vec<u32>> =
            std::collections::HashMap::new();
        for (i, p) in positions.iter().enumerate() {
            cells.entry(Self::key(p, cell_km)).or_default().push(i as u32);
        }
        Self { cell_km, cells }
    }

    fn key(p: &Cartesian3, cell_km: f64) -> (i32, i32, i32) {
        (
            (p.x / cell_km).floor() as i32,
            (p.y / cell_km).floor() as i32,
            (p.z / cell_km).floor() as i32,
        )
    }

    /// Calls `f(i, j)` with i < j for every candidate pair no farther apart
    /// than one cell in each axis.
    fn for_each_candidate_pair<F: FnMut(u32, u32)>(&self, positions: &[Cartesian3], mut f: F) {
        for (i, p) in positions.iter().enumerate() {
            let (cx, cy, cz) = Self::key(p, self.cell_km);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let Some(bucket) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) else {
                            continue;
                        };
                        for &j in bucket {
                            if j > i as u32 {
                                f(i as u32, j);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Builds the slot graph: a satellite pair is linked when its straight-line
/// distance is within `lisl_range_km` and the segment clears the grazing
/// shell; a station-satellite pair is linked when the distance is within the
/// station's range (for a range derived from the minimum elevation this is
/// exactly the elevation-mask condition).
pub fn build_graph(
    sat_states: &[SatelliteState],
    stations: &[GroundStation],
    lisl_range_km: f64,
    earth: &EarthModel,
) -> Result<LinkGraph, LinkGraphError> {
    if sat_states.is_empty() {
        return Err(LinkGraphError::EmptyConstellation);
    }
    if stations.len() < 2 {
        return Err(LinkGraphError::MissingStationPair(stations.len()));
    }
    if !(lisl_range_km > 0.0) || stations.iter().any(|s| !(s.range_km > 0.0)) {
        return Err(LinkGraphError::NonPositiveRange);
    }

    let station_count = stations.len();
    let n = station_count + sat_states.len();
    let mut node_ids = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    for (i, s) in stations.iter().enumerate() {
        node_ids.push(NodeId::Station(i as u16));
        positions.push(geo::geodetic_to_ecef(&s.location, earth));
    }
    for s in sat_states {
        node_ids.push(NodeId::Satellite(s.id));
        positions.push(s.position_ecef);
    }

    let mut adjacency: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut edge_count = 0usize;
    let mut push_edge = |adjacency: &mut Vec<Vec<(u32, f64)>>, a: usize, b: usize, len: f64| {
        adjacency[a].push((b as u32, len));
        adjacency[b].push((a as u32, len));
        edge_count += 1;
    };

    // Station-satellite links.
    for (gi, gs) in stations.iter().enumerate() {
        let gp = positions[gi];
        for (si, sat) in sat_states.iter().enumerate() {
            let d = gp.distance(&sat.position_ecef);
            if d <= gs.range_km {
                push_edge(&mut adjacency, gi, station_count + si, d);
            }
        }
    }

    // Satellite-satellite links, pruned by the cube grid.
    let sat_positions = &positions[station_count..];
    let grid = CubeGrid::build(sat_positions, lisl_range_km);
    let range2 = lisl_range_km * lisl_range_km;
    grid.for_each_candidate_pair(sat_positions, |i, j| {
        let a = &sat_positions[i as usize];
        let b = &sat_positions[j as usize];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let dz = a.z - b.z;
        let d2 = dx * dx + dy * dy + dz * dz;
        if d2 <= range2 && geo::line_of_sight_clear(a, b, earth) {
            push_edge(
                &mut adjacency,
                station_count + i as usize,
                station_count + j as usize,
                d2.sqrt(),
            );
        }
    });

    Ok(LinkGraph {
        node_ids,
        positions,
        adjacency,
        station_count,
        edge_count,
        c_m_per_s: earth.c_m_per_s,
    })
}

/// A routed station-to-station path at one slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    /// Node sequence from source station to destination station.
    pub nodes: Vec<NodeId>,
    pub total_length_km: f64,
    pub total_latency_ms: f64,
    /// Number of satellite-to-satellite hops: satellites on the path minus one.
    pub lisl_count: u32,
    pub slot_index: u32,
}

impl PathResult {
    /// Renders the node sequence as `gs:<name>|p<i>s<j>|...|gs:<name>`.
    pub fn path_label(&self, stations: &[GroundStation]) -> String {
        self.nodes
            .iter()
            .map(|n| match n {
                NodeId::Station(i) => format!("gs:{}", stations[*i as usize].name),
                NodeId::Satellite(id) => id.to_string(),
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    latency_s: f64,
    node: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.latency_s == other.latency_s && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the smallest first.
        other
            .latency_s
            .total_cmp(&self.latency_s)
            .then_with(|| other.node.cmp(&self.node))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn reconstruct(pred: &[u32], node: u32) -> Vec<u32> {
    let mut path = vec![node];
    let mut cur = node;
    while pred[cur as usize] != u32::MAX {
        cur = pred[cur as usize];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Latency-minimal path between two station nodes.
///
/// Ties in total latency resolve to the lexicographically smallest node-index
/// sequence, which equals the smallest `NodeId` sequence because graph
/// indices are assigned in `NodeId` order. With strictly positive edge
/// weights every predecessor on a shortest path settles before its successor,
/// so comparing candidate predecessor paths during relaxation is exact.
pub fn shortest_path(
    graph: &LinkGraph,
    src_station: usize,
    dst_station: usize,
) -> Result<PathResult, LinkGraphError> {
    if src_station >= graph.station_count() {
        return Err(LinkGraphError::NotAStation(src_station));
    }
    if dst_station >= graph.station_count() {
        return Err(LinkGraphError::NotAStation(dst_station));
    }
    if src_station == dst_station {
        return Err(LinkGraphError::SameStation);
    }

    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![u32::MAX; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src_station] = 0.0;
    heap.push(HeapEntry { latency_s: 0.0, node: src_station as u32 });

    while let Some(HeapEntry { latency_s, node }) = heap.pop() {
        let u = node as usize;
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if u == dst_station {
            break;
        }
        for &(v, len) in graph.neighbors(u) {
            let vu = v as usize;
            if settled[vu] {
                continue;
            }
            let cand = latency_s + graph.latency_s(len);
            if cand < dist[vu] {
                dist[vu] = cand;
                pred[vu] = node;
                heap.push(HeapEntry { latency_s: cand, node: v });
            } else if cand == dist[vu] && pred[vu] != node {
                // Equal latency: keep the lexicographically smaller path.
                let mut via_new = reconstruct(&pred, node);
                via_new.push(v);
                let via_old = reconstruct(&pred, v);
                if via_new < via_old {
                    pred[vu] = node;
                }
            }
        }
    }

    if !settled[dst_station] {
        return Err(LinkGraphError::Unreachable);
    }

    let indices = reconstruct(&pred, dst_station as u32);
    let mut total_length_km = 0.0;
    let mut total_latency_s = 0.0;
    for w in indices.windows(2) {
        let len = graph.position(w[0] as usize).distance(&graph.position(w[1] as usize));
        total_length_km += len;
        total_latency_s += graph.latency_s(len);
    }
    debug_assert!((total_latency_s - dist[dst_station]).abs() <= 1e-12);
    let nodes: Vec<NodeId> = indices.iter().map(|&i| graph.node_id(i as usize)).collect();
    let sat_count = nodes.len().saturating_sub(2) as u32;
    Ok(PathResult {
        nodes,
        total_length_km,
        total_latency_ms: total_latency_s * 1000.0,
        lisl_count: sat_count.saturating_sub(1),
        slot_index: 0,
    })
}

/// One simulated slot: the routed path, or `None` when the stations were
/// disconnected at that instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub slot_index: u32,
    pub t_s: f64,
    pub path: Option<PathResult>,
}

/// Results of a full simulation run over one station pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotSeries {
    pub records: Vec<SlotRecord>,
    /// Mean end-to-end latency over the reachable slots; `None` if no slot
    /// had a path.
    pub mean_latency_ms: Option<f64>,
    /// Slot counts keyed by inter-satellite hop count, over reachable slots.
    pub lisl_histogram: BTreeMap<u32, u32>,
    pub unreachable_count: u32,
}

impl SlotSeries {
    pub fn slot_count(&self) -> usize {
        self.records.len()
    }
}

/// Everything one simulation run needs besides the Earth model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub walker: WalkerConfig,
    pub lisl_range_km: f64,
    pub stations: [GroundStation; 2],
    pub duration_s: u32,
    pub dt_s: u32,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SimulationError {
    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Constellation(#[from] constellation::ConstellationError),
    #[error(transparent)]
    Graph(#[from] LinkGraphError),
}

/// Runs the per-slot loop: propagate, rebuild the graph, route. Slots are
/// independent and fan out in parallel under the default execution mode;
/// results are slot-ordered and identical between modes.
pub fn simulate_connection(
    spec: &SimulationSpec,
    earth: &EarthModel,
) -> Result<SlotSeries, SimulationError> {
    simulate_connection_with(spec, earth, ExecMode::default())
}

/// [`simulate_connection`] with an explicit execution mode.
pub fn simulate_connection_with(
    spec: &SimulationSpec,
    earth: &EarthModel,
    mode: ExecMode,
) -> Result<SlotSeries, SimulationError> {
    if spec.dt_s == 0 || spec.duration_s == 0 || spec.duration_s % spec.dt_s != 0 {
        return Err(SimulationError::InvalidSpec(format!(
            "duration ({} s) must be a positive multiple of dt ({} s)",
            spec.duration_s, spec.dt_s
        )));
    }
    if spec.stations[0].name == spec.stations[1].name {
        return Err(SimulationError::Graph(LinkGraphError::SameStation));
    }
    let elements = constellation::generate_walker(&spec.walker)?;
    let n_slots = (spec.duration_s / spec.dt_s) as usize;

    let records: Vec<SlotRecord> = exec::map_indexed(n_slots, mode, |k| {
        let t_s = (k as f64) * f64::from(spec.dt_s);
        let states = constellation::propagate(&elements, t_s, &spec.walker, earth);
        let graph = build_graph(&states, &spec.stations, spec.lisl_range_km, earth)
            .expect("validated spec cannot produce an invalid graph");
        let path = match shortest_path(&graph, 0, 1) {
            Ok(mut p) => {
                p.slot_index = k as u32;
                Some(p)
            }
            Err(LinkGraphError::Unreachable) => None,
            Err(e) => unreachable!("station indices are fixed: {e}"),
        };
        SlotRecord { slot_index: k as u32, t_s, path }
    });

    Ok(summarize(records))
}

fn summarize(records: Vec<SlotRecord>) -> SlotSeries {
    let mut lisl_histogram = BTreeMap::new();
    let mut sum_ms = 0.0;
    let mut reachable = 0u32;
    let mut unreachable_count = 0u32;
    for r in &records {
        match &r.path {
            Some(p) => {
                sum_ms += p.total_latency_ms;
                reachable += 1;
                *lisl_histogram.entry(p.lisl_count).or_insert(0) += 1;
            }
            None => unreachable_count += 1,
        }
    }
    let mean_latency_ms = (reachable > 0).then(|| sum_ms / f64::from(reachable));
    SlotSeries { records, mean_latency_ms, lisl_histogram, unreachable_count }
}
