//! Origin-local pruning of a multi-path set.
//!
//! Node `i` only knows its own neighborhood, the neighborhoods of its
//! neighbors, and the `Next_k(i, j)` forwarding sets. From that it picks out
//! two kinds of neighboring node pairs:
//!
//! * type A: a forwarding link `k -> k'` of some path with `k` in `N_i`
//!   (or the mirror). Each carries `Paths(k, k')`, the paths using it.
//! * type B: two neighbors lying on paths that share no member, one of them in
//!   `N_i` and the other in `N_i` or in `Next_l(i, j)` for some `l` in `N_i`.
//!
//! The conflict graph `G_ij` gets one vertex per path plus a temporary vertex
//! per type-B pair. Any two pairs that touch a common mesh node have their
//! vertex groups joined (a type-A pair is also joined against itself, which
//! links the paths sharing that forwarding link). One distance-2 closure pass
//! follows, then the temporaries are dropped. A maximum-weight independent
//! set under weights `1 / C_p` is the refined path set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Adjacency, NodeId};
use crate::mwis::{self, MwisError, Selection, Weight, WeightedGraph};
use crate::routing::{next_sets, NextMap, Path, PathId, PathSet, RoutingConfig};

#[derive(Debug, Error, PartialEq)]
pub enum RefineError {
    #[error("cannot refine an empty path set")]
    EmptyPathSet,
    #[error("classification references path {0}, which is not in the path set")]
    UnknownPath(PathId),
    #[error(transparent)]
    Mwis(#[from] MwisError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeAPair {
    pub k: NodeId,
    pub k2: NodeId,
    pub paths: BTreeSet<PathId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeBPair {
    pub k: NodeId,
    pub k2: NodeId,
}

/// Pairs are unordered and stored with `k < k2`, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairClassification {
    pub type_a: Vec<TypeAPair>,
    pub type_b: Vec<TypeBPair>,
}

fn ordered(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    (u.min(v), u.max(v))
}

/// Finds the type-A and type-B pairs visible from the origin of `ps`.
///
/// Only `N_i` and `N_k` for path nodes `k` in `N_i` are ever looked up in
/// `net`; everything else comes from `ps` and `nexts`.
pub fn classify_pairs(net: &impl Adjacency, ps: &PathSet, nexts: &NextMap) -> PairClassification {
    let i = ps.origin();
    let n_i = net.neighbors(i);
    let in_n_i = |v: NodeId| n_i.binary_search(&v).is_ok();

    let mut on_paths: BTreeMap<NodeId, BTreeSet<PathId>> = BTreeMap::new();
    for (id, path) in ps.paths().iter().enumerate() {
        for &v in path.nodes() {
            on_paths.entry(v).or_default().insert(id);
        }
    }
    let forwarders: Vec<NodeId> = n_i
        .iter()
        .copied()
        .filter(|k| on_paths.contains_key(k))
        .collect();

    // Type A: k in N_i forwarding to k'.
    let mut type_a: BTreeMap<(NodeId, NodeId), BTreeSet<PathId>> = BTreeMap::new();
    for &k in &forwarders {
        for &k2 in nexts.get(&k).into_iter().flatten() {
            if k2 == i {
                continue;
            }
            let members = ps
                .paths()
                .iter()
                .enumerate()
                .filter(|(_, p)| p.has_link(k, k2) || p.has_link(k2, k))
                .map(|(id, _)| id);
            type_a.entry(ordered(k, k2)).or_default().extend(members);
        }
    }

    // Nodes reachable in one forwarding step from some l in N_i.
    let next_of_neighbors: BTreeSet<NodeId> = forwarders
        .iter()
        .filter_map(|l| nexts.get(l))
        .flatten()
        .copied()
        .collect();

    // Type B: a path node k in N_i next to a path node k' on a disjoint set
    // of paths, with k' in N_i or forwarded to by some l in N_i.
    let mut type_b = BTreeSet::new();
    for &k in &forwarders {
        for &k2 in net.neighbors(k) {
            if k2 == i {
                continue;
            }
            let Some(k2_paths) = on_paths.get(&k2) else {
                continue;
            };
            let pair = ordered(k, k2);
            if type_a.contains_key(&pair) || !on_paths[&k].is_disjoint(k2_paths) {
                continue;
            }
            if in_n_i(k2) || next_of_neighbors.contains(&k2) {
                type_b.insert(pair);
            }
        }
    }

    PairClassification {
        type_a: type_a
            .into_iter()
            .map(|((k, k2), paths)| TypeAPair { k, k2, paths })
            .collect(),
        type_b: type_b
            .into_iter()
            .map(|(k, k2)| TypeBPair { k, k2 })
            .collect(),
    }
}

/// The path-conflict graph `G_ij`, with the intermediate stages kept for
/// inspection. Vertices `0..path_count` are paths; temporaries were numbered
/// `path_count..path_count + temp_count` and no longer appear in `edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub path_count: usize,
    pub temp_count: usize,
    /// Edges after the pair-coincidence step, temporaries included.
    pub coincidence_edges: BTreeSet<(usize, usize)>,
    /// Edges added by the distance-2 closure, temporaries included.
    pub closure_edges: BTreeSet<(usize, usize)>,
    /// Final edges between path vertices.
    pub edges: BTreeSet<(PathId, PathId)>,
    /// `1 / C_p` per path.
    pub weights: Vec<Weight>,
}

impl ConflictGraph {
    pub fn to_weighted_graph(&self) -> WeightedGraph {
        WeightedGraph::with_edges(self.weights.clone(), self.edges.iter().copied())
            .expect("conflict graph edges join path vertices only")
    }

    pub fn is_independent(&self, ids: &[PathId]) -> bool {
        ids.iter().all(|&u| {
            ids.iter()
                .all(|&v| u == v || !self.edges.contains(&ordered(u, v)))
        })
    }

    /// Plain-text listing for golden comparisons. `label` names path
    /// vertices; temporaries print as `x0`, `x1`, ...
    pub fn dump(&self, label: impl Fn(PathId) -> String) -> String {
        let name = |v: usize| {
            if v < self.path_count {
                label(v)
            } else {
                format!("x{}", v - self.path_count)
            }
        };
        let mut out = String::new();
        let _ = writeln!(out, "paths {}", self.path_count);
        let _ = writeln!(out, "temporaries {}", self.temp_count);
        for (id, w) in self.weights.iter().enumerate() {
            let _ = writeln!(out, "weight {} {}", name(id), w);
        }
        for (stage, edges) in [
            ("coincidence", &self.coincidence_edges),
            ("closure", &self.closure_edges),
            ("final", &self.edges),
        ] {
            for &(u, v) in edges {
                let _ = writeln!(out, "{stage} {} {}", name(u), name(v));
            }
        }
        out
    }
}

/// Builds `G_ij` from a classification: coincidence edges, one distance-2
/// closure pass over that graph, then removal of the temporaries.
pub fn build_conflict_graph(
    pc: &PairClassification,
    ps: &PathSet,
) -> Result<ConflictGraph, RefineError> {
    let path_count = ps.len();
    let temp_count = pc.type_b.len();
    let order = path_count + temp_count;

    // Each pair as (its two mesh nodes, its vertex group).
    let mut pairs: Vec<([NodeId; 2], Vec<usize>)> = Vec::with_capacity(order);
    for a in &pc.type_a {
        if let Some(&bad) = a.paths.iter().find(|&&p| p >= path_count) {
            return Err(RefineError::UnknownPath(bad));
        }
        pairs.push(([a.k, a.k2], a.paths.iter().copied().collect()));
    }
    for (t, b) in pc.type_b.iter().enumerate() {
        pairs.push(([b.k, b.k2], vec![path_count + t]));
    }

    let mut coincidence = BTreeSet::new();
    for (x, (nodes_x, group_x)) in pairs.iter().enumerate() {
        for (nodes_y, group_y) in &pairs[x..] {
            if !nodes_x.iter().any(|v| nodes_y.contains(v)) {
                continue;
            }
            for &u in group_x {
                for &v in group_y {
                    if u != v {
                        coincidence.insert(ordered(u, v));
                    }
                }
            }
        }
    }

    let mut adj = vec![BTreeSet::new(); order];
    for &(u, v) in &coincidence {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut closure = BTreeSet::new();
    for (u, nbrs) in adj.iter().enumerate() {
        for &m in nbrs {
            for &v in &adj[m] {
                if u < v && !adj[u].contains(&v) {
                    closure.insert((u, v));
                }
            }
        }
    }

    let edges = coincidence
        .iter()
        .chain(&closure)
        .copied()
        .filter(|&(u, v)| u < path_count && v < path_count)
        .collect();
    let weights = ps
        .paths()
        .iter()
        .map(|p| Weight::new(1, p.hop_count() as u64))
        .collect();

    Ok(ConflictGraph {
        path_count,
        temp_count,
        coincidence_edges: coincidence,
        closure_edges: closure,
        edges,
        weights,
    })
}

/// Source of `P_kj` path sets, used to enlarge single-path inputs.
pub trait RouteSource {
    fn routes(&self, from: NodeId, to: NodeId) -> PathSet;
}

/// Routes computed on demand with a fixed routing setup.
pub struct ConfiguredRoutes<'a, A: Adjacency> {
    pub net: &'a A,
    pub config: RoutingConfig,
}

impl<A: Adjacency> RouteSource for ConfiguredRoutes<'_, A> {
    fn routes(&self, from: NodeId, to: NodeId) -> PathSet {
        self.config.route(self.net, from, to)
    }
}

/// Adds to a single-path set every `P_kj` path prefixed by `i` that avoids
/// `i`, is new, and is no longer (in hops) than the original path.
pub fn enlarge_single(ps: &PathSet, routes_from_k: &PathSet) -> PathSet {
    let mut out = ps.clone();
    let Some(original) = ps.paths().first() else {
        return out;
    };
    let i = ps.origin();
    let k = original.nodes()[1];
    for cand in routes_from_k.paths() {
        if cand.origin() != k || cand.destination() != ps.destination() || cand.contains(i) {
            continue;
        }
        if cand.hop_count() + 1 > original.hop_count() {
            continue;
        }
        let mut nodes = Vec::with_capacity(cand.nodes().len() + 1);
        nodes.push(i);
        nodes.extend_from_slice(cand.nodes());
        let path = Path::new(nodes).expect("prefixing a path that avoids i keeps it simple");
        if !out.contains(&path) {
            out.push(path).expect("endpoints match and duplicates were filtered");
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Decision {
    /// The one-hop path makes every other path pointless.
    DirectLink,
    /// A single multi-hop path that could not be enlarged.
    Moot,
    /// Conflict-graph selection.
    Selected {
        classification: PairClassification,
        graph: ConflictGraph,
        selection: Selection,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    /// The set actually fed to the selection, after any enlargement.
    pub candidates: PathSet,
    pub decision: Decision,
    pub refined: PathSet,
}

impl Refinement {
    /// True when the refined paths form an independent set of the conflict
    /// graph (trivially so for the special cases).
    pub fn is_sound(&self) -> bool {
        match &self.decision {
            Decision::Selected {
                graph, selection, ..
            } => graph.is_independent(&selection.vertices),
            _ => true,
        }
    }
}

/// Runs the full refinement decision for one origin-destination pair.
pub fn refine(
    net: &impl Adjacency,
    ps: &PathSet,
    routes: &impl RouteSource,
) -> Result<Refinement, RefineError> {
    if ps.is_empty() {
        return Err(RefineError::EmptyPathSet);
    }
    if let Some(direct) = ps.paths().iter().position(|p| p.hop_count() == 1) {
        return Ok(Refinement {
            candidates: ps.clone(),
            decision: Decision::DirectLink,
            refined: ps.select(&[direct]),
        });
    }

    let candidates = if ps.len() == 1 {
        let k = ps.paths()[0].nodes()[1];
        let enlarged = enlarge_single(ps, &routes.routes(k, ps.destination()));
        if enlarged.len() == 1 {
            return Ok(Refinement {
                candidates: ps.clone(),
                decision: Decision::Moot,
                refined: ps.clone(),
            });
        }
        enlarged
    } else {
        ps.clone()
    };

    let nexts = next_sets(&candidates);
    let classification = classify_pairs(net, &candidates, &nexts);
    let graph = build_conflict_graph(&classification, &candidates)?;
    let selection = mwis::solve(&graph.to_weighted_graph())?;
    let refined = candidates.select(&selection.vertices);
    Ok(Refinement {
        candidates,
        decision: Decision::Selected {
            classification,
            graph,
            selection,
        },
        refined,
    })
}
