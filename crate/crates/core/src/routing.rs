//! Initial path discovery.
//!
//! Four deterministic graph proxies stand in for the on-demand and
//! proactive routing agents:
//!
//! | method           | proxy for | construction                                        |
//! |------------------|-----------|-----------------------------------------------------|
//! | `SPA`            | AODV      | lexicographically smallest shortest path            |
//! | `K_DISJOINT`     | AOMDV     | up to K internally node-disjoint paths, shortest first |
//! | `MPR_SPA`        | OLSR      | shortest path over the MPR forwarding digraph       |
//! | `MPR_K_DISJOINT` | MP-OLSR   | disjoint extraction over the MPR forwarding digraph |
//!
//! Ties are always broken toward the lexicographically smallest node
//! sequence, so every method is a pure function of its inputs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, NodeId};

/// Index of a path inside its [`PathSet`].
pub type PathId = usize;

pub const AOMDV_DEFAULT_K: usize = 5;

#[derive(Debug, Error, PartialEq)]
pub enum RoutingError {
    #[error("path must have at least two nodes")]
    TooShort,
    #[error("node {0} repeats in path")]
    RepeatedNode(NodeId),
    #[error("node {node} is out of range (network has {n} nodes)")]
    InvalidNode { node: NodeId, n: usize },
    #[error("nodes {0} and {1} are consecutive in a path but not neighbors")]
    NotAdjacent(NodeId, NodeId),
    #[error("path {path:?} does not run from {origin} to {destination}")]
    WrongEndpoints {
        path: Vec<NodeId>,
        origin: NodeId,
        destination: NodeId,
    },
    #[error("duplicate path {0:?}")]
    DuplicatePath(Vec<NodeId>),
    #[error("origin and destination must differ (both {0})")]
    SameEndpoints(NodeId),
    #[error("k_max must be at least 1")]
    ZeroK,
    #[error("unknown routing method {0:?}")]
    UnknownMethod(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    pub fn new(nodes: Vec<NodeId>) -> Result<Self, RoutingError> {
        if nodes.len() < 2 {
            return Err(RoutingError::TooShort);
        }
        let mut seen = BTreeSet::new();
        for &n in &nodes {
            if !seen.insert(n) {
                return Err(RoutingError::RepeatedNode(n));
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Number of links, `C_p`.
    pub fn hop_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn origin(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn destination(&self) -> NodeId {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.contains(&node)
    }

    /// Interior nodes (everything except the two endpoints).
    pub fn interior(&self) -> &[NodeId] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    /// Consecutive `(transmitter, receiver)` pairs in travel order.
    pub fn links(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn has_link(&self, u: NodeId, v: NodeId) -> bool {
        self.links().any(|l| l == (u, v))
    }

    pub fn validate_in(&self, net: &impl Adjacency) -> Result<(), RoutingError> {
        let n = net.node_count();
        for &node in &self.nodes {
            if node >= n {
                return Err(RoutingError::InvalidNode { node, n });
            }
        }
        for (u, v) in self.links() {
            if !net.is_neighbor(u, v) {
                return Err(RoutingError::NotAdjacent(u, v));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The paths currently established from `origin` to `destination`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    origin: NodeId,
    destination: NodeId,
    paths: Vec<Path>,
}

impl PathSet {
    pub fn empty(origin: NodeId, destination: NodeId) -> Self {
        Self {
            origin,
            destination,
            paths: Vec::new(),
        }
    }

    pub fn new(origin: NodeId, destination: NodeId, paths: Vec<Path>) -> Result<Self, RoutingError> {
        let mut set = Self::empty(origin, destination);
        for p in paths {
            set.push(p)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, path: Path) -> Result<PathId, RoutingError> {
        if path.origin() != self.origin || path.destination() != self.destination {
            return Err(RoutingError::WrongEndpoints {
                path: path.nodes,
                origin: self.origin,
                destination: self.destination,
            });
        }
        if self.paths.contains(&path) {
            return Err(RoutingError::DuplicatePath(path.nodes));
        }
        self.paths.push(path);
        Ok(self.paths.len() - 1)
    }

    pub fn origin(&self) -> NodeId {
        self.origin
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, id: PathId) -> Option<&Path> {
        self.paths.get(id)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn contains(&self, path: &Path) -> bool {
        self.paths.contains(path)
    }

    pub fn validate_in(&self, net: &impl Adjacency) -> Result<(), RoutingError> {
        self.paths.iter().try_for_each(|p| p.validate_in(net))
    }

    /// Keeps the listed paths, in the given order.
    pub fn select(&self, ids: &[PathId]) -> PathSet {
        PathSet {
            origin: self.origin,
            destination: self.destination,
            paths: ids.iter().map(|&id| self.paths[id].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoutingMethod {
    #[serde(rename = "SPA")]
    Spa,
    #[serde(rename = "K_DISJOINT")]
    KDisjoint,
    #[serde(rename = "MPR_SPA")]
    MprSpa,
    #[serde(rename = "MPR_K_DISJOINT")]
    MprKDisjoint,
}

impl RoutingMethod {
    pub const ALL: [RoutingMethod; 4] = [
        RoutingMethod::Spa,
        RoutingMethod::KDisjoint,
        RoutingMethod::MprSpa,
        RoutingMethod::MprKDisjoint,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RoutingMethod::Spa => "SPA",
            RoutingMethod::KDisjoint => "K_DISJOINT",
            RoutingMethod::MprSpa => "MPR_SPA",
            RoutingMethod::MprKDisjoint => "MPR_K_DISJOINT",
        }
    }

    pub fn is_multipath(self) -> bool {
        matches!(self, RoutingMethod::KDisjoint | RoutingMethod::MprKDisjoint)
    }
}

impl fmt::Display for RoutingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RoutingMethod {
    type Err = RoutingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        RoutingMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == norm)
            .ok_or_else(|| RoutingError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoutingConfig {
    pub method: RoutingMethod,
    pub k_max: usize,
}

impl RoutingConfig {
    pub fn new(method: RoutingMethod, k_max: usize) -> Result<Self, RoutingError> {
        if k_max == 0 {
            return Err(RoutingError::ZeroK);
        }
        Ok(Self { method, k_max })
    }

    /// Default path budget: 5 for the AOMDV proxy; 3 (delta <= 8) or 5 for
    /// the MP-OLSR proxy; 1 for the single-path methods.
    pub fn with_default_k(method: RoutingMethod, delta: usize) -> Self {
        let k_max = match method {
            RoutingMethod::Spa | RoutingMethod::MprSpa => 1,
            RoutingMethod::KDisjoint => AOMDV_DEFAULT_K,
            RoutingMethod::MprKDisjoint => {
                if delta <= 8 {
                    3
                } else {
                    5
                }
            }
        };
        Self { method, k_max }
    }

    pub fn route(&self, net: &impl Adjacency, i: NodeId, j: NodeId) -> PathSet {
        match self.method {
            RoutingMethod::Spa => spa_route(net, i, j),
            RoutingMethod::KDisjoint => k_disjoint_routes(net, i, j, self.k_max),
            RoutingMethod::MprSpa => mpr_route(net, i, j),
            RoutingMethod::MprKDisjoint => mpr_k_disjoint(net, i, j, self.k_max),
        }
    }
}

/// Directed view used by the route searches. Arc lists are sorted.
struct Digraph {
    out: Vec<Vec<NodeId>>,
    inc: Vec<Vec<NodeId>>,
}

impl Digraph {
    fn undirected(net: &impl Adjacency) -> Self {
        let out: Vec<Vec<NodeId>> = (0..net.node_count())
            .map(|u| net.neighbors(u).to_vec())
            .collect();
        Self {
            inc: out.clone(),
            out,
        }
    }

    /// Arcs `u -> v` where `v` is an MPR of `u`, plus every arc into `dest`.
    fn mpr(net: &impl Adjacency, dest: NodeId) -> Self {
        let n = net.node_count();
        let mut out: Vec<Vec<NodeId>> = (0..n)
            .map(|u| mpr_select(net, u).into_iter().collect())
            .collect();
        for &u in net.neighbors(dest) {
            if let Err(pos) = out[u].binary_search(&dest) {
                out[u].insert(pos, dest);
            }
        }
        let mut inc = vec![Vec::new(); n];
        for (u, list) in out.iter().enumerate() {
            for &v in list {
                inc[v].push(u);
            }
        }
        Self { out, inc }
    }

    /// Lexicographically smallest shortest `i -> j` node sequence avoiding
    /// `blocked` nodes and the optional banned arc.
    fn lex_shortest(
        &self,
        i: NodeId,
        j: NodeId,
        blocked: &[bool],
        banned: Option<(NodeId, NodeId)>,
    ) -> Option<Vec<NodeId>> {
        let usable = |u: NodeId, v: NodeId| !blocked[u] && !blocked[v] && banned != Some((u, v));
        // Distances to j over reversed arcs.
        let mut dist = vec![usize::MAX; self.out.len()];
        dist[j] = 0;
        let mut queue = VecDeque::from([j]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.inc[v] {
                if dist[u] == usize::MAX && usable(u, v) {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        if dist[i] == usize::MAX {
            return None;
        }
        let mut seq = vec![i];
        let mut cur = i;
        while cur != j {
            let next = self.out[cur]
                .iter()
                .copied()
                .find(|&v| usable(cur, v) && dist[v] != usize::MAX && dist[v] + 1 == dist[cur])
                .expect("a predecessor on a shortest path always has a successor");
            seq.push(next);
            cur = next;
        }
        Some(seq)
    }

    /// Iterated shortest-path extraction; interior nodes of each extracted
    /// path are removed before the next search.
    fn disjoint(&self, i: NodeId, j: NodeId, k: usize) -> Vec<Path> {
        let mut blocked = vec![false; self.out.len()];
        let mut banned = None;
        let mut found = Vec::new();
        while found.len() < k {
            let Some(seq) = self.lex_shortest(i, j, &blocked, banned) else {
                break;
            };
            if seq.len() == 2 {
                banned = Some((i, j));
            }
            for &v in &seq[1..seq.len() - 1] {
                blocked[v] = true;
            }
            found.push(Path { nodes: seq });
        }
        found
    }
}

fn endpoints_ok(net: &impl Adjacency, i: NodeId, j: NodeId) -> bool {
    i != j && i < net.node_count() && j < net.node_count()
}

fn to_set(i: NodeId, j: NodeId, paths: Vec<Path>) -> PathSet {
    PathSet {
        origin: i,
        destination: j,
        paths,
    }
}

/// Single shortest path (AODV proxy). Empty when `j` is unreachable.
pub fn spa_route(net: &impl Adjacency, i: NodeId, j: NodeId) -> PathSet {
    k_disjoint_routes(net, i, j, 1)
}

/// Up to `k` internally node-disjoint paths, shortest first (AOMDV proxy).
pub fn k_disjoint_routes(net: &impl Adjacency, i: NodeId, j: NodeId, k: usize) -> PathSet {
    if !endpoints_ok(net, i, j) {
        return PathSet::empty(i, j);
    }
    to_set(i, j, Digraph::undirected(net).disjoint(i, j, k))
}

/// Greedy multi-point relay set of `k`: a subset of `N_k` covering every
/// strict two-hop neighbor, with redundant members pruned afterwards.
pub fn mpr_select(net: &impl Adjacency, k: NodeId) -> BTreeSet<NodeId> {
    let one_hop = net.neighbors(k);
    let mut uncovered: BTreeSet<NodeId> = one_hop
        .iter()
        .flat_map(|&m| net.neighbors(m).iter().copied())
        .filter(|&v| v != k && one_hop.binary_search(&v).is_err())
        .collect();
    let two_hop = uncovered.clone();
    let coverage = |m: NodeId, pool: &BTreeSet<NodeId>| {
        net.neighbors(m).iter().filter(|v| pool.contains(v)).count()
    };

    let mut chosen = BTreeSet::new();
    while !uncovered.is_empty() {
        // Largest coverage first; ties keep the smallest id.
        let (best, gain) = one_hop
            .iter()
            .filter(|m| !chosen.contains(*m))
            .map(|&m| (m, coverage(m, &uncovered)))
            .fold((usize::MAX, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if gain == 0 {
            break;
        }
        chosen.insert(best);
        for v in net.neighbors(best) {
            uncovered.remove(v);
        }
    }

    // Drop members whose coverage is subsumed by the rest.
    for m in chosen.clone() {
        let rest: Vec<NodeId> = chosen.iter().copied().filter(|&x| x != m).collect();
        let covered = two_hop
            .iter()
            .all(|t| rest.iter().any(|&r| net.is_neighbor(r, *t)));
        if covered {
            chosen.remove(&m);
        }
    }
    chosen
}

/// Shortest path over the MPR forwarding digraph (OLSR proxy).
pub fn mpr_route(net: &impl Adjacency, i: NodeId, j: NodeId) -> PathSet {
    mpr_k_disjoint(net, i, j, 1)
}

/// Disjoint extraction over the MPR forwarding digraph (MP-OLSR proxy).
pub fn mpr_k_disjoint(net: &impl Adjacency, i: NodeId, j: NodeId, k: usize) -> PathSet {
    if !endpoints_ok(net, i, j) {
        return PathSet::empty(i, j);
    }
    to_set(i, j, Digraph::mpr(net, j).disjoint(i, j, k))
}

/// `Next_k(i, j)` for every forwarding node `k` of a path set.
pub type NextMap = BTreeMap<NodeId, BTreeSet<NodeId>>;

pub fn next_sets(ps: &PathSet) -> NextMap {
    let mut map = NextMap::new();
    for path in ps.paths() {
        for (u, v) in path.links() {
            map.entry(u).or_default().insert(v);
        }
    }
    map
}

/// Serialized form of a [`PathSet`] together with the routing setup that
/// produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSetDocument {
    pub origin: NodeId,
    pub destination: NodeId,
    pub method: RoutingMethod,
    pub k_max: usize,
    pub paths: Vec<Vec<NodeId>>,
}

impl PathSetDocument {
    pub fn new(ps: &PathSet, cfg: RoutingConfig) -> Self {
        Self {
            origin: ps.origin(),
            destination: ps.destination(),
            method: cfg.method,
            k_max: cfg.k_max,
            paths: ps.paths().iter().map(|p| p.nodes().to_vec()).collect(),
        }
    }

    pub fn config(&self) -> Result<RoutingConfig, RoutingError> {
        RoutingConfig::new(self.method, self.k_max)
    }

    pub fn to_path_set(&self) -> Result<PathSet, RoutingError> {
        if self.origin == self.destination {
            return Err(RoutingError::SameEndpoints(self.origin));
        }
        let paths = self
            .paths
            .iter()
            .map(|nodes| Path::new(nodes.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        PathSet::new(self.origin, self.destination, paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AdjacencyList;

    fn g(n: usize, edges: &[(NodeId, NodeId)]) -> AdjacencyList {
        AdjacencyList::from_edges(n, edges).unwrap()
    }

    fn nodes(ps: &PathSet) -> Vec<Vec<NodeId>> {
        ps.paths().iter().map(|p| p.nodes().to_vec()).collect()
    }

    #[test]
    fn path_invariants() {
        assert_eq!(Path::new(vec![3]), Err(RoutingError::TooShort));
        assert_eq!(Path::new(vec![1, 2, 1]), Err(RoutingError::RepeatedNode(1)));
        let p = Path::new(vec![0, 4, 2]).unwrap();
        assert_eq!(p.hop_count(), 2);
        assert_eq!(p.interior(), &[4]);
        assert_eq!(p.to_string(), "(0,4,2)");
    }

    #[test]
    fn path_set_rejects_bad_members() {
        let mut ps = PathSet::empty(0, 2);
        ps.push(Path::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert!(matches!(
            ps.push(Path::new(vec![0, 1, 2]).unwrap()),
            Err(RoutingError::DuplicatePath(_))
        ));
        assert!(matches!(
            ps.push(Path::new(vec![1, 2]).unwrap()),
            Err(RoutingError::WrongEndpoints { .. })
        ));
    }

    #[test]
    fn spa_line_direct_and_disconnected() {
        let line = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(nodes(&spa_route(&line, 0, 2)), vec![vec![0, 1, 2]]);
        let direct = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(nodes(&spa_route(&direct, 0, 2)), vec![vec![0, 2]]);
        let split = g(4, &[(0, 1), (2, 3)]);
        assert!(spa_route(&split, 0, 3).is_empty());
    }

    #[test]
    fn spa_breaks_ties_lexicographically() {
        // 0 reaches 5 via 3 or via 1; both two hops.
        let net = g(6, &[(0, 3), (3, 5), (0, 1), (1, 5)]);
        assert_eq!(nodes(&spa_route(&net, 0, 5)), vec![vec![0, 1, 5]]);
        // Tie resolved at the second relay, not the first.
        let net = g(6, &[(0, 1), (1, 4), (1, 2), (4, 5), (2, 5)]);
        assert_eq!(nodes(&spa_route(&net, 0, 5)), vec![vec![0, 1, 2, 5]]);
    }

    #[test]
    fn three_relays_give_three_disjoint_paths() {
        let net = g(5, &[(0, 1), (1, 4), (0, 2), (2, 4), (0, 3), (3, 4)]);
        let ps = k_disjoint_routes(&net, 0, 4, 5);
        assert_eq!(nodes(&ps), vec![vec![0, 1, 4], vec![0, 2, 4], vec![0, 3, 4]]);
    }

    #[test]
    fn direct_link_comes_first_and_is_used_once() {
        let net = g(4, &[(0, 3), (0, 1), (1, 3), (0, 2), (2, 3)]);
        let ps = k_disjoint_routes(&net, 0, 3, 5);
        assert_eq!(nodes(&ps), vec![vec![0, 3], vec![0, 1, 3], vec![0, 2, 3]]);
    }

    #[test]
    fn k_one_equals_spa() {
        let net = g(6, &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]);
        assert_eq!(k_disjoint_routes(&net, 0, 5, 1), spa_route(&net, 0, 5));
        assert_eq!(mpr_k_disjoint(&net, 0, 5, 1), mpr_route(&net, 0, 5));
    }

    #[test]
    fn mpr_chain_and_leaf() {
        let chain = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(mpr_select(&chain, 0), BTreeSet::from([1]));
        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(mpr_select(&star, 0).is_empty());
    }

    #[test]
    fn mpr_wheel_picks_single_cover() {
        // 0 has neighbors 1, 2, 3; node 1 reaches both two-hop nodes 4 and 5.
        let net = g(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (3, 5), (1, 2), (1, 3)]);
        assert_eq!(mpr_select(&net, 0), BTreeSet::from([1]));
    }

    #[test]
    fn mpr_restriction_lengthens_second_disjoint_path() {
        // 0 and 5 joined by (0,1,5), (0,4,5) and (0,2,3,5). Node 4 is not an
        // MPR of 0, so only the 3-hop alternative survives the restriction.
        let net = g(6, &[(0, 1), (1, 5), (0, 2), (2, 3), (3, 5), (0, 4), (4, 5)]);
        assert_eq!(mpr_select(&net, 0), BTreeSet::from([1, 2]));
        assert_eq!(
            nodes(&k_disjoint_routes(&net, 0, 5, 3)),
            vec![vec![0, 1, 5], vec![0, 4, 5], vec![0, 2, 3, 5]]
        );
        assert_eq!(
            nodes(&mpr_k_disjoint(&net, 0, 5, 3)),
            vec![vec![0, 1, 5], vec![0, 2, 3, 5]]
        );
    }

    #[test]
    fn mpr_route_matches_spa_on_complete_restriction() {
        // On a path graph every relay is an MPR, so the restriction is vacuous.
        let net = g(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(mpr_route(&net, 0, 4), spa_route(&net, 0, 4));
    }

    #[test]
    fn next_sets_single_path_and_empty() {
        let ps = PathSet::new(5, 9, vec![Path::new(vec![5, 7, 9]).unwrap()]).unwrap();
        let next = next_sets(&ps);
        assert_eq!(next.len(), 2);
        assert_eq!(next[&5], BTreeSet::from([7]));
        assert_eq!(next[&7], BTreeSet::from([9]));
        assert!(next_sets(&PathSet::empty(1, 2)).is_empty());
    }

    #[test]
    fn method_names_parse() {
        for m in RoutingMethod::ALL {
            assert_eq!(m.as_str().parse::<RoutingMethod>().unwrap(), m);
        }
        assert_eq!("k-disjoint".parse::<RoutingMethod>().unwrap(), RoutingMethod::KDisjoint);
        assert!("aodv".parse::<RoutingMethod>().is_err());
    }

    #[test]
    fn default_k_follows_delta() {
        assert_eq!(RoutingConfig::with_default_k(RoutingMethod::KDisjoint, 4).k_max, 5);
        assert_eq!(RoutingConfig::with_default_k(RoutingMethod::MprKDisjoint, 8).k_max, 3);
        assert_eq!(RoutingConfig::with_default_k(RoutingMethod::MprKDisjoint, 16).k_max, 5);
        assert_eq!(RoutingConfig::with_default_k(RoutingMethod::Spa, 32).k_max, 1);
        assert_eq!(RoutingConfig::new(RoutingMethod::Spa, 0), Err(RoutingError::ZeroK));
    }

    #[test]
    fn document_round_trip() {
        let net = g(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]);
        let cfg = RoutingConfig::new(RoutingMethod::KDisjoint, 5).unwrap();
        let ps = cfg.route(&net, 0, 3);
        let doc = PathSetDocument::new(&ps, cfg);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"K_DISJOINT\""));
        let back: PathSetDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_path_set().unwrap(), ps);
        assert_eq!(back.config().unwrap(), cfg);
    }
}
