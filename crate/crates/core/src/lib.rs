//! Local refinement of multi-path routes in wireless mesh networks.
//!
//! The pipeline is: generate a unit-disk mesh ([`topology`]), discover an
//! initial path set per origin-destination pair ([`routing`]), prune it with
//! the origin-local conflict-graph heuristic ([`refine`], backed by the exact
//! solver in [`mwis`]), and compare original against refined path sets under
//! a slotted TDMA scheduler ([`scheduler`], [`metrics`]). [`experiment`] ties
//! the pieces together into reproducible sweeps.

pub mod error;
pub mod experiment;
pub mod fig1;
pub mod graph;
pub mod metrics;
pub mod mwis;
pub mod refine;
pub mod rng;
pub mod routing;
pub mod scheduler;
pub mod topology;

pub use error::Error;
pub use graph::{Adjacency, AdjacencyList, NodeId};
pub use routing::{Path, PathId, PathSet, RoutingConfig, RoutingMethod};
pub use topology::{GenerationConfig, Network, Point};
