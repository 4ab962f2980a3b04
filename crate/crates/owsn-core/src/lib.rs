//! Latency lab for long-haul data paths: terrestrial fiber versus
//! laser-linked LEO satellite shells.
//!
//! The crate answers one question from two directions. Analytically, the
//! [`crossover`] module solves for the terrestrial distance beyond which a
//! satellite shell beats fiber on propagation latency, across a family of
//! ingress/egress geometries. Empirically, the [`constellation`] and
//! [`linkgraph`] modules simulate a Walker-delta shell second by second and
//! route a connection through it, and [`compare`] assembles both sides into a
//! latency report per city pair.
//!
//! With the default `parallel` feature, simulation slots and parameter-grid
//! cells fan out over a rayon pool; building with
//! `--no-default-features` gives a fully sequential build with identical
//! results.

pub mod catalog;
pub mod compare;
pub mod constellation;
pub mod crossover;
pub mod exec;
pub mod geo;
pub mod linkgraph;

pub use catalog::CityCatalog;
pub use compare::{ComparisonReport, ConnectionScenario, OftnConfig, OwsnConfig};
pub use constellation::{GroundStation, SatelliteId, WalkerConfig};
pub use crossover::{CrossoverQuery, CrossoverResult, Scenario};
pub use exec::ExecMode;
pub use geo::{Cartesian3, EarthModel, GeodeticPoint};
pub use linkgraph::{PathResult, SimulationSpec, SlotSeries};
