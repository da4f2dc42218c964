//! Slotted TDMA evaluation of a set of active paths under the protocol
//! interference model.
//!
//! Every path owns one FIFO queue per hop. In each slot the origins inject,
//! then a conflict-free link set is chosen greedily (longest queue first,
//! then fewest hops left, then lowest link index) and every chosen queue
//! moves its head packet one hop. Only the first-hop queue is capped; drops
//! happen at injection and nowhere else.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, NodeId};
use crate::routing::{Path, PathSet, RoutingError};

/// Label written into run metadata for this scheduling policy.
pub const SCHEDULER_NAME: &str = "greedy-tdma";

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("invalid path in active set: {0}")]
    InvalidPath(#[from] RoutingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedLink {
    pub tx: NodeId,
    pub rx: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LinkMask(Vec<u64>);

impl LinkMask {
    fn new(len: usize) -> Self {
        Self(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn intersects(&self, other: &LinkMask) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn clear(&mut self) {
        self.0.iter_mut().for_each(|w| *w = 0);
    }
}

/// Distinct directed links of a path collection and their pairwise
/// conflicts. Links are numbered in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkConflictGraph {
    pub links: Vec<DirectedLink>,
    pub conflicts: BTreeSet<(usize, usize)>,
    // Row `l` has bit `m` set when `l` and `m` conflict, and bit `l` itself.
    masks: Vec<LinkMask>,
}

impl LinkConflictGraph {
    pub fn index_of(&self, link: DirectedLink) -> Option<usize> {
        self.links.iter().position(|&l| l == link)
    }

    pub fn conflict(&self, a: usize, b: usize) -> bool {
        self.conflicts.contains(&(a.min(b), a.max(b)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(x, &a)| set[x + 1..].iter().all(|&b| a != b && !self.conflict(a, b)))
    }
}

/// Two links conflict when they share a node or an endpoint of one is a
/// neighbor of an endpoint of the other.
fn links_conflict(net: &impl Adjacency, a: DirectedLink, b: DirectedLink) -> bool {
    let ea = [a.tx, a.rx];
    let eb = [b.tx, b.rx];
    ea.iter()
        .any(|&u| eb.iter().any(|&v| u == v || net.is_neighbor(u, v)))
}

pub fn link_conflict_graph<'a>(
    net: &impl Adjacency,
    paths: impl IntoIterator<Item = &'a Path>,
) -> LinkConflictGraph {
    let mut links = Vec::new();
    let mut seen = BTreeMap::new();
    for p in paths {
        for (tx, rx) in p.links() {
            let link = DirectedLink { tx, rx };
            seen.entry(link).or_insert_with(|| {
                links.push(link);
                links.len() - 1
            });
        }
    }
    let mut conflicts = BTreeSet::new();
    let mut masks = vec![LinkMask::new(links.len()); links.len()];
    for a in 0..links.len() {
        masks[a].set(a);
        for b in (a + 1)..links.len() {
            if links_conflict(net, links[a], links[b]) {
                conflicts.insert((a, b));
                masks[a].set(b);
                masks[b].set(a);
            }
        }
    }
    LinkConflictGraph {
        links,
        conflicts,
        masks,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub total_slots: u64,
    pub warmup_slots: u64,
    /// Packets offered per path per slot.
    pub injection: u32,
    /// Capacity of each path's first-hop queue.
    pub queue_cap: usize,
    /// Slot length in seconds; only used to convert rates in reports.
    pub slot_seconds: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            total_slots: 67_500,
            warmup_slots: 7_500,
            injection: 1,
            queue_cap: 50,
            slot_seconds: 0.002,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if self.warmup_slots >= self.total_slots {
            return bad("warmup_slots must be smaller than total_slots");
        }
        if self.queue_cap == 0 {
            return bad("queue_cap must be at least 1");
        }
        if !(self.slot_seconds.is_finite() && self.slot_seconds > 0.0) {
            return bad("slot_seconds must be positive");
        }
        Ok(())
    }

    pub fn measured_slots(&self) -> u64 {
        self.total_slots - self.warmup_slots
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdTraffic {
    pub origin: NodeId,
    pub destination: NodeId,
    /// Sum of the measured deliveries over this pair's paths.
    pub delivered: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrafficStats {
    /// Measured deliveries per path, paths numbered by flattening the active
    /// path sets in order.
    pub per_path: Vec<u64>,
    /// Index into `per_od` for every path.
    pub path_owner: Vec<usize>,
    /// One entry per active path set, in input order.
    pub per_od: Vec<OdTraffic>,
    pub measured_slots: u64,
    pub injected: u64,
    pub dropped: u64,
    /// Deliveries over the whole run, warm-up included.
    pub delivered_total: u64,
    pub max_head_queue: usize,
}

impl TrafficStats {
    pub fn delivered_measured(&self) -> u64 {
        self.per_path.iter().sum()
    }

    pub fn od_counts(&self) -> Vec<u64> {
        self.per_od.iter().map(|o| o.delivered).collect()
    }
}

/// What an observer sees of one slot.
pub struct SlotView<'a> {
    pub slot: u64,
    /// Link indices that fired, in selection order.
    pub active: &'a [usize],
    /// Links with at least one nonempty queue before selection.
    pub backlogged: &'a [usize],
    /// Per-path queue lengths after the moves, indexed `[path][hop]`.
    pub queues: &'a [Vec<usize>],
}

pub trait SlotObserver {
    fn on_slot(&mut self, _view: &SlotView<'_>) {}
    fn on_delivery(&mut self, _path: usize, _seq: u64, _slot: u64) {}
}

impl SlotObserver for () {}

/// Writes `slot: l1 l2 ...` lines of fired link indices.
pub struct TraceWriter<W: std::io::Write> {
    pub out: W,
    pub error: Option<std::io::Error>,
}

impl<W: std::io::Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out, error: None }
    }
}

impl<W: std::io::Write> SlotObserver for TraceWriter<W> {
    fn on_slot(&mut self, view: &SlotView<'_>) {
        if self.error.is_some() {
            return;
        }
        let links: Vec<String> = view.active.iter().map(ToString::to_string).collect();
        if let Err(e) = writeln!(self.out, "{}: {}", view.slot, links.join(" ")) {
            self.error = Some(e);
        }
    }
}

struct HopQueue {
    path: usize,
    hop: usize,
    link: usize,
    hops_left: usize,
}

pub fn simulate_tdma(
    net: &impl Adjacency,
    active: &[PathSet],
    cfg: &SimConfig,
) -> Result<TrafficStats, SimError> {
    simulate_tdma_observed(net, active, cfg, &mut ())
}

pub fn simulate_tdma_observed(
    net: &impl Adjacency,
    active: &[PathSet],
    cfg: &SimConfig,
    observer: &mut impl SlotObserver,
) -> Result<TrafficStats, SimError> {
    cfg.validate()?;
    for ps in active {
        ps.validate_in(net)?;
    }
    let paths: Vec<&Path> = active.iter().flat_map(|ps| ps.paths()).collect();
    let path_owner: Vec<usize> = active
        .iter()
        .enumerate()
        .flat_map(|(o, ps)| std::iter::repeat_n(o, ps.len()))
        .collect();
    let lcg = link_conflict_graph(net, paths.iter().copied());

    let mut hop_queues = Vec::new();
    for (p, path) in paths.iter().enumerate() {
        for (h, (tx, rx)) in path.links().enumerate() {
            hop_queues.push(HopQueue {
                path: p,
                hop: h,
                link: lcg.index_of(DirectedLink { tx, rx }).expect("link was registered"),
                hops_left: path.hop_count() - h,
            });
        }
    }
    let mut queues: Vec<Vec<VecDeque<u64>>> = paths
        .iter()
        .map(|p| vec![VecDeque::new(); p.hop_count()])
        .collect();
    let mut next_seq = vec![0u64; paths.len()];

    let mut stats = TrafficStats {
        per_path: vec![0; paths.len()],
        path_owner,
        per_od: active
            .iter()
            .map(|ps| OdTraffic {
                origin: ps.origin(),
                destination: ps.destination(),
                delivered: 0,
            })
            .collect(),
        measured_slots: cfg.measured_slots(),
        injected: 0,
        dropped: 0,
        delivered_total: 0,
        max_head_queue: 0,
    };

    let mut chosen = LinkMask::new(lcg.links.len());
    let mut backlog_mask = LinkMask::new(lcg.links.len());
    let mut candidates: Vec<usize> = Vec::with_capacity(hop_queues.len());
    let mut fired: Vec<usize> = Vec::new();
    let mut fired_links: Vec<usize> = Vec::new();
    let mut backlogged: Vec<usize> = Vec::new();
    let mut lengths: Vec<Vec<usize>> = paths.iter().map(|p| vec![0; p.hop_count()]).collect();

    for slot in 0..cfg.total_slots {
        for (p, qs) in queues.iter_mut().enumerate() {
            for _ in 0..cfg.injection {
                if qs[0].len() < cfg.queue_cap {
                    qs[0].push_back(next_seq[p]);
                    next_seq[p] += 1;
                    stats.injected += 1;
                } else {
                    stats.dropped += 1;
                }
            }
            stats.max_head_queue = stats.max_head_queue.max(qs[0].len());
        }

        candidates.clear();
        candidates.extend(
            (0..hop_queues.len()).filter(|&q| !queues[hop_queues[q].path][hop_queues[q].hop].is_empty()),
        );
        candidates.sort_by_key(|&q| {
            let hq = &hop_queues[q];
            (
                std::cmp::Reverse(queues[hq.path][hq.hop].len()),
                hq.hops_left,
                hq.link,
                q,
            )
        });

        chosen.clear();
        fired.clear();
        fired_links.clear();
        for &q in &candidates {
            let link = hop_queues[q].link;
            if !lcg.masks[link].intersects(&chosen) {
                chosen.set(link);
                fired.push(q);
                fired_links.push(link);
            }
        }

        for &q in &fired {
            let hq = &hop_queues[q];
            let seq = queues[hq.path][hq.hop]
                .pop_front()
                .expect("only nonempty queues are scheduled");
            if hq.hops_left == 1 {
                stats.delivered_total += 1;
                if slot >= cfg.warmup_slots {
                    stats.per_path[hq.path] += 1;
                }
                observer.on_delivery(hq.path, seq, slot);
            } else {
                queues[hq.path][hq.hop + 1].push_back(seq);
            }
        }

        backlog_mask.clear();
        backlogged.clear();
        for &q in &candidates {
            let link = hop_queues[q].link;
            if !backlog_mask.get(link) {
                backlog_mask.set(link);
                backlogged.push(link);
            }
        }
        for (p, qs) in queues.iter().enumerate() {
            for (h, q) in qs.iter().enumerate() {
                lengths[p][h] = q.len();
            }
        }
        observer.on_slot(&SlotView {
            slot,
            active: &fired_links,
            backlogged: &backlogged,
            queues: &lengths,
        });
    }

    for (p, &owner) in stats.path_owner.iter().enumerate() {
        stats.per_od[owner].delivered += stats.per_path[p];
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AdjacencyList;

    fn set(origin: NodeId, dest: NodeId, paths: &[&[NodeId]]) -> PathSet {
        PathSet::new(
            origin,
            dest,
            paths.iter().map(|n| Path::new(n.to_vec()).unwrap()).collect(),
        )
        .unwrap()
    }

    fn cfg(total: u64, warmup: u64) -> SimConfig {
        SimConfig {
            total_slots: total,
            warmup_slots: warmup,
            ..SimConfig::default()
        }
    }

    #[test]
    fn conflict_rules() {
        // 0-1, 0-2, 1-3, 3-4, 5-6 with 4 and 5 far apart.
        let net = AdjacencyList::from_edges(7, &[(0, 1), (0, 2), (1, 3), (3, 4), (5, 6)]).unwrap();
        let p1 = Path::new(vec![0, 1]).unwrap();
        let p2 = Path::new(vec![0, 2]).unwrap();
        let p3 = Path::new(vec![3, 4]).unwrap();
        let p4 = Path::new(vec![5, 6]).unwrap();
        let g = link_conflict_graph(&net, [&p1, &p2, &p3, &p4]);
        assert_eq!(g.links.len(), 4);
        assert!(g.conflict(0, 1), "shared transmitter");
        assert!(g.conflict(0, 2), "receiver 1 neighbors transmitter 3");
        assert!(!g.conflict(1, 2));
        assert!(!g.conflict(0, 3) && !g.conflict(2, 3));
    }

    #[test]
    fn links_deduplicated_across_paths() {
        let net = AdjacencyList::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let a = Path::new(vec![0, 1, 2]).unwrap();
        let b = Path::new(vec![0, 1, 3]).unwrap();
        let c = Path::new(vec![1, 0]).unwrap();
        let g = link_conflict_graph(&net, [&a, &b, &c]);
        assert_eq!(g.links.len(), 4);
        assert_eq!(g.index_of(DirectedLink { tx: 1, rx: 0 }), Some(3));
    }

    #[test]
    fn single_hop_delivers_every_slot() {
        let net = AdjacencyList::from_edges(2, &[(0, 1)]).unwrap();
        let stats = simulate_tdma(&net, &[set(0, 1, &[&[0, 1]])], &cfg(1100, 100)).unwrap();
        assert_eq!(stats.per_path, vec![1000]);
        assert_eq!(stats.per_od[0].delivered, 1000);
        assert_eq!(stats.dropped, 0);
    }

    #[test]
    fn two_hop_chain_alternates() {
        let net = AdjacencyList::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        // The first-hop queue needs ~100 slots to saturate; measure after that.
        let stats = simulate_tdma(&net, &[set(0, 2, &[&[0, 1, 2]])], &cfg(1500, 500)).unwrap();
        let x = stats.per_path[0] as i64;
        assert!((x - 500).abs() <= 1, "got {x}");
    }

    #[test]
    fn conflicting_single_links_share_the_medium() {
        let net = AdjacencyList::from_edges(4, &[(0, 1), (2, 3), (1, 2)]).unwrap();
        let active = [set(0, 1, &[&[0, 1]]), set(2, 3, &[&[2, 3]])];
        let stats = simulate_tdma(&net, &active, &cfg(1100, 100)).unwrap();
        let total = stats.delivered_measured() as i64;
        assert!((total - 1000).abs() <= 1, "got {total}");
    }

    #[test]
    fn empty_active_set() {
        let net = AdjacencyList::from_edges(2, &[(0, 1)]).unwrap();
        let stats = simulate_tdma(&net, &[], &cfg(10, 1)).unwrap();
        assert!(stats.per_path.is_empty());
        assert_eq!(stats.measured_slots, 9);
    }

    #[test]
    fn config_errors() {
        let net = AdjacencyList::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            simulate_tdma(&net, &[], &cfg(10, 10)),
            Err(SimError::InvalidConfig(_))
        ));
        let bad = SimConfig {
            queue_cap: 0,
            ..cfg(10, 1)
        };
        assert!(simulate_tdma(&net, &[], &bad).is_err());
        let unknown_link = set(0, 1, &[&[0, 1]]);
        let other = AdjacencyList::from_edges(2, &[]).unwrap();
        assert!(matches!(
            simulate_tdma(&other, &[unknown_link], &cfg(10, 1)),
            Err(SimError::InvalidPath(_))
        ));
    }

    #[test]
    fn trace_writer_lines() {
        let net = AdjacencyList::from_edges(2, &[(0, 1)]).unwrap();
        let mut tw = TraceWriter::new(Vec::new());
        simulate_tdma_observed(&net, &[set(0, 1, &[&[0, 1]])], &cfg(3, 1), &mut tw).unwrap();
        assert_eq!(String::from_utf8(tw.out).unwrap(), "0: 0\n1: 0\n2: 0\n");
    }
}
