//! Random unit-disk mesh generation.
//!
//! Node 0 sits at the center of a square; every further node is drawn
//! uniformly over the square and kept only if it is at least
//! [`MIN_SPACING`] away from every placed node, has at least one neighbor
//! among them, and pushes nobody (itself included) past the degree cap. A run
//! of `max_attempts` consecutive rejections throws the partial network away
//! and restarts on the next placement stream.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, NodeId};
use crate::rng::{stream_rng, Stream};

pub const DEFAULT_SIDE: f64 = 1500.0;
pub const MIN_SPACING: f64 = 25.0;
pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;
pub const DEFAULT_MAX_RESTARTS: usize = 100;
pub const NETWORK_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid node id {node} (network has {n} nodes)")]
    InvalidNode { node: NodeId, n: usize },
    #[error("network generation failed after {restarts} restarts (n={n}, delta={delta}, side={side})")]
    GenerationFailure {
        n: usize,
        delta: usize,
        side: f64,
        restarts: usize,
    },
    #[error("unsupported network format version {0}")]
    UnsupportedVersion(u32),
    #[error("inconsistent network file: {0}")]
    Inconsistent(String),
}

/// Communication (and interference) radius for `n` nodes with degree cap
/// `delta`: `200 * sqrt(20 * delta / n)`.
pub fn comm_radius(n: usize, delta: usize) -> Result<f64, TopologyError> {
    if n == 0 || delta == 0 {
        return Err(TopologyError::InvalidArgument(format!(
            "comm_radius needs n >= 1 and delta >= 1, got n={n}, delta={delta}"
        )));
    }
    Ok(200.0 * (20.0 * delta as f64 / n as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationConfig {
    pub n: usize,
    pub delta: usize,
    pub side: f64,
    pub max_attempts: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl GenerationConfig {
    pub fn new(n: usize, delta: usize, seed: u64) -> Self {
        Self {
            n,
            delta,
            side: DEFAULT_SIDE,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            max_restarts: DEFAULT_MAX_RESTARTS,
            seed,
        }
    }

    pub fn with_side(mut self, side: f64) -> Self {
        self.side = side;
        self
    }

    pub fn validate(&self) -> Result<(), TopologyError> {
        let bad = |m: &str| Err(TopologyError::InvalidArgument(m.to_string()));
        if self.n < 2 {
            return bad("n must be at least 2");
        }
        if self.delta < 1 {
            return bad("delta must be at least 1");
        }
        if self.max_attempts < 1 {
            return bad("max_attempts must be at least 1");
        }
        if self.max_restarts < 1 {
            return bad("max_restarts must be at least 1");
        }
        if !(self.side.is_finite() && self.side > 0.0) {
            return bad("side must be positive and finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub n: usize,
    pub delta: usize,
    pub side: f64,
    pub seed: u64,
}

/// A static mesh: node positions plus the unit-disk adjacency they induce.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    params: NetworkParams,
    radius: f64,
    positions: Vec<Point>,
    adjacency: Vec<Vec<NodeId>>,
}

/// One broken invariant found by [`Network::audit`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NodeCount { expected: usize, actual: usize },
    OutsideSquare { node: NodeId },
    CenterMisplaced,
    TooClose { u: NodeId, v: NodeId },
    Isolated { node: NodeId },
    DegreeAboveCap { node: NodeId, degree: usize },
    AdjacencyMismatch { u: NodeId, v: NodeId },
}

impl Network {
    /// Assembles a network from explicit positions, deriving adjacency from
    /// `radius`. No invariant is enforced here; see [`Network::audit`].
    pub fn from_parts(params: NetworkParams, radius: f64, positions: Vec<Point>) -> Self {
        let r2 = radius * radius;
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            for v in (u + 1)..n {
                if positions[u].distance_sq(&positions[v]) <= r2 {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            params,
            radius,
            positions,
            adjacency,
        }
    }

    pub fn params(&self) -> &NetworkParams {
        &self.params
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    fn check_node(&self, u: NodeId) -> Result<(), TopologyError> {
        if u < self.positions.len() {
            Ok(())
        } else {
            Err(TopologyError::InvalidNode {
                node: u,
                n: self.positions.len(),
            })
        }
    }

    /// True iff `u != v` and the two nodes are within the radius (inclusive).
    pub fn are_neighbors(&self, u: NodeId, v: NodeId) -> Result<bool, TopologyError> {
        self.check_node(u)?;
        self.check_node(v)?;
        Ok(u != v && self.positions[u].distance_sq(&self.positions[v]) <= self.radius * self.radius)
    }

    /// Checks every structural invariant of a generated network and returns
    /// the violations found (empty means the network is sound).
    pub fn audit(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.positions.len();
        let p = &self.params;
        if n != p.n {
            out.push(Violation::NodeCount {
                expected: p.n,
                actual: n,
            });
        }
        let center = Point::new(p.side / 2.0, p.side / 2.0);
        if self.positions.first() != Some(&center) {
            out.push(Violation::CenterMisplaced);
        }
        let r2 = self.radius * self.radius;
        let spacing2 = MIN_SPACING * MIN_SPACING;
        for (u, pu) in self.positions.iter().enumerate() {
            if !(0.0..=p.side).contains(&pu.x) || !(0.0..=p.side).contains(&pu.y) {
                out.push(Violation::OutsideSquare { node: u });
            }
            let degree = self.adjacency[u].len();
            if degree == 0 {
                out.push(Violation::Isolated { node: u });
            }
            if degree > p.delta {
                out.push(Violation::DegreeAboveCap { node: u, degree });
            }
            for v in (u + 1)..n {
                let d2 = pu.distance_sq(&self.positions[v]);
                if d2 < spacing2 {
                    out.push(Violation::TooClose { u, v });
                }
                let within = d2 <= r2;
                let listed_uv = self.adjacency[u].binary_search(&v).is_ok();
                let listed_vu = self.adjacency[v].binary_search(&u).is_ok();
                if within != listed_uv || within != listed_vu {
                    out.push(Violation::AdjacencyMismatch { u, v });
                }
            }
        }
        out
    }

    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            version: NETWORK_FORMAT_VERSION,
            n: self.params.n,
            delta: self.params.delta,
            side: self.params.side,
            radius: self.radius,
            seed: self.params.seed,
            positions: self.positions.iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    /// Rebuilds a network from its stored form, recomputing adjacency and
    /// rejecting anything that fails the audit.
    pub fn from_document(doc: &NetworkDocument) -> Result<Self, TopologyError> {
        if doc.version != NETWORK_FORMAT_VERSION {
            return Err(TopologyError::UnsupportedVersion(doc.version));
        }
        let expected = comm_radius(doc.n, doc.delta)
            .map_err(|e| TopologyError::Inconsistent(e.to_string()))?;
        if doc.radius != expected {
            return Err(TopologyError::Inconsistent(format!(
                "radius {} does not match n={}, delta={} (expected {expected})",
                doc.radius, doc.n, doc.delta
            )));
        }
        let params = NetworkParams {
            n: doc.n,
            delta: doc.delta,
            side: doc.side,
            seed: doc.seed,
        };
        let positions = doc.positions.iter().map(|&[x, y]| Point::new(x, y)).collect();
        let net = Self::from_parts(params, doc.radius, positions);
        let violations = net.audit();
        if let Some(first) = violations.first() {
            return Err(TopologyError::Inconsistent(format!(
                "{} invariant violation(s), first: {first:?}",
                violations.len()
            )));
        }
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("network document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, TopologyError> {
        let doc: NetworkDocument =
            serde_json::from_str(text).map_err(|e| TopologyError::Inconsistent(e.to_string()))?;
        Self::from_document(&doc)
    }
}

impl Adjacency for Network {
    fn node_count(&self) -> usize {
        self.positions.len()
    }

    fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }
}

/// On-disk form of a [`Network`]. Adjacency is never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub version: u32,
    pub n: usize,
    pub delta: usize,
    pub side: f64,
    pub radius: f64,
    pub seed: u64,
    pub positions: Vec<[f64; 2]>,
}

/// Generates a network by seeded rejection sampling. Deterministic in `cfg`.
pub fn generate_network(cfg: &GenerationConfig) -> Result<Network, TopologyError> {
    cfg.validate()?;
    let radius = comm_radius(cfg.n, cfg.delta)?;
    let r2 = radius * radius;
    let spacing2 = MIN_SPACING * MIN_SPACING;
    let center = Point::new(cfg.side / 2.0, cfg.side / 2.0);

    for restart in 0..cfg.max_restarts {
        let mut rng = stream_rng(cfg.seed, Stream::Placement, restart as u64);
        let mut positions = Vec::with_capacity(cfg.n);
        let mut degrees = Vec::with_capacity(cfg.n);
        positions.push(center);
        degrees.push(0usize);
        let mut rejections = 0;
        let mut nbrs = Vec::new();

        while positions.len() < cfg.n {
            let cand = Point::new(rng.gen::<f64>() * cfg.side, rng.gen::<f64>() * cfg.side);
            nbrs.clear();
            let mut ok = true;
            for (v, pv) in positions.iter().enumerate() {
                let d2 = cand.distance_sq(pv);
                if d2 < spacing2 {
                    ok = false;
                    break;
                }
                if d2 <= r2 {
                    if degrees[v] >= cfg.delta {
                        ok = false;
                        break;
                    }
                    nbrs.push(v);
                }
            }
            ok = ok && !nbrs.is_empty() && nbrs.len() <= cfg.delta;
            if ok {
                for &v in &nbrs {
                    degrees[v] += 1;
                }
                degrees.push(nbrs.len());
                positions.push(cand);
                rejections = 0;
            } else {
                rejections += 1;
                if rejections >= cfg.max_attempts {
                    break;
                }
            }
        }

        if positions.len() == cfg.n {
            let params = NetworkParams {
                n: cfg.n,
                delta: cfg.delta,
                side: cfg.side,
                seed: cfg.seed,
            };
            return Ok(Network::from_parts(params, radius, positions));
        }
    }

    Err(TopologyError::GenerationFailure {
        n: cfg.n,
        delta: cfg.delta,
        side: cfg.side,
        restarts: cfg.max_restarts,
    })
}
