//! Oracles and fixtures shared by the integration tests. The oracles here are
//! deliberately naive and share no code with the library.

#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mra_core::mwis::{Weight, WeightedGraph};
use mra_core::scheduler::{LinkConflictGraph, SlotObserver, SlotView};
use mra_core::topology::{generate_network, GenerationConfig};
use mra_core::{Adjacency, AdjacencyList, Network, NodeId};

pub fn big(r: &Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn big128(r: &Ratio<u128>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Every independent set of `order` vertices, as sorted vertex lists.
pub fn independent_sets(order: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    assert!(order <= 22, "enumeration oracle is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << order) {
        let set: Vec<usize> = (0..order).filter(|v| mask & (1 << v) != 0).collect();
        let independent = edges
            .iter()
            .all(|&(u, v)| !(set.contains(&u) && set.contains(&v)));
        if independent {
            out.push(set);
        }
    }
    out
}

/// Maximum total weight and the lexicographically smallest optimal set.
pub fn brute_mwis(weights: &[Weight], edges: &[(usize, usize)]) -> (BigRational, Vec<usize>) {
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    for set in independent_sets(weights.len(), edges) {
        let w: BigRational = set.iter().map(|&v| big(&weights[v])).sum();
        let better = match &best {
            None => true,
            Some((bw, bs)) => w > *bw || (w == *bw && set < *bs),
        };
        if better {
            best = Some((w, set));
        }
    }
    best.expect("the empty set is always independent")
}

/// Erdős-Rényi graph with random rational weights in `[1/12, 12]`.
pub fn random_weighted(rng: &mut impl Rng, order: usize, density: f64) -> (Vec<Weight>, Vec<(usize, usize)>) {
    let weights = (0..order)
        .map(|_| Ratio::new(rng.gen_range(1..=12u64), rng.gen_range(1..=12u64)))
        .collect();
    let mut edges = Vec::new();
    for u in 0..order {
        for v in (u + 1)..order {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    (weights, edges)
}

pub fn weighted_graph(weights: &[Weight], edges: &[(usize, usize)]) -> WeightedGraph {
    WeightedGraph::with_edges(weights.to_vec(), edges.iter().copied()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn mesh(n: usize, delta: usize, seed: u64) -> Network {
    generate_network(&GenerationConfig::new(n, delta, seed)).expect("desk-scale meshes are feasible")
}

/// Hop distances from `src` by breadth-first search.
pub fn bfs(net: &impl Adjacency, src: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; net.node_count()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in net.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Adjacency wrapper that records which nodes had their neighbor lists read.
pub struct AuditedAdjacency<'a> {
    pub inner: &'a AdjacencyList,
    pub queried: RefCell<BTreeSet<NodeId>>,
}

impl<'a> AuditedAdjacency<'a> {
    pub fn new(inner: &'a AdjacencyList) -> Self {
        Self {
            inner,
            queried: RefCell::new(BTreeSet::new()),
        }
    }
}

impl Adjacency for AuditedAdjacency<'_> {
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.queried.borrow_mut().insert(u);
        self.inner.neighbors(u)
    }

    fn is_neighbor(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).contains(&v)
    }
}

/// Copy of a network's adjacency as a plain list.
pub fn adjacency_of(net: &impl Adjacency) -> AdjacencyList {
    let mut edges = Vec::new();
    for u in 0..net.node_count() {
        for &v in net.neighbors(u) {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    AdjacencyList::from_edges(net.node_count(), &edges).unwrap()
}

/// Records every violation of the per-slot invariants it sees.
pub struct Auditor<'a> {
    pub lcg: &'a LinkConflictGraph,
    pub queue_cap: usize,
    pub last_seq: BTreeMap<usize, u64>,
    pub problems: Vec<String>,
}

impl SlotObserver for Auditor<'_> {
    fn on_slot(&mut self, view: &SlotView<'_>) {
        if !self.lcg.is_independent(view.active) {
            self.problems.push(format!("slot {}: dependent set {:?}", view.slot, view.active));
        }
        for &l in view.backlogged {
            let idle_and_free = !view.active.contains(&l) && view.active.iter().all(|&a| !self.lcg.conflict(a, l));
            if idle_and_free {
                self.problems.push(format!("slot {}: link {l} left idle", view.slot));
            }
        }
        for q in view.queues {
            if q[0] > self.queue_cap {
                self.problems.push(format!("slot {}: first queue over cap", view.slot));
            }
        }
    }

    fn on_delivery(&mut self, path: usize, seq: u64, slot: u64) {
        if let Some(&prev) = self.last_seq.get(&path) {
            if seq <= prev {
                self.problems.push(format!("slot {slot}: path {path} delivered {seq} after {prev}"));
            }
        }
        self.last_seq.insert(path, seq);
    }
}

impl<'a> Auditor<'a> {
    pub fn new(lcg: &'a LinkConflictGraph, queue_cap: usize) -> Self {
        Self {
            lcg,
            queue_cap,
            last_seq: BTreeMap::new(),
            problems: Vec::new(),
        }
    }
}
