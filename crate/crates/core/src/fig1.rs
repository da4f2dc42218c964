//! The five-path reference instance used by the golden tests and the `fig1`
//! CLI verb.
//!
//! Nodes: `i = 0`, `k1..k6 = 1..6`, `j = 7`. Paths (by id):
//!
//! ```text
//! a = i k1 j          (2 hops)
//! b = i k2 k6 j       (3 hops)
//! c = i k3 k2 k6 j    (4 hops)
//! d = i k1 k5 j       (3 hops)
//! e = i k4 k6 j       (3 hops)
//! ```
//!
//! `k3` and `k5` are neighbors without sharing a path, which yields the single
//! type-B pair. No other non-path adjacency exists.

use std::collections::BTreeSet;

use crate::graph::{AdjacencyList, NodeId};
use crate::refine::{PairClassification, TypeAPair, TypeBPair};
use crate::routing::{Path, PathId, PathSet};

pub const I: NodeId = 0;
pub const K1: NodeId = 1;
pub const K2: NodeId = 2;
pub const K3: NodeId = 3;
pub const K4: NodeId = 4;
pub const K5: NodeId = 5;
pub const K6: NodeId = 6;
pub const J: NodeId = 7;

pub const A: PathId = 0;
pub const B: PathId = 1;
pub const C: PathId = 2;
pub const D: PathId = 3;
pub const E: PathId = 4;

pub fn label(id: PathId) -> String {
    ["a", "b", "c", "d", "e"]
        .get(id)
        .map_or_else(|| format!("p{id}"), |s| s.to_string())
}

pub fn path_set() -> PathSet {
    let raw: [&[NodeId]; 5] = [
        &[I, K1, J],
        &[I, K2, K6, J],
        &[I, K3, K2, K6, J],
        &[I, K1, K5, J],
        &[I, K4, K6, J],
    ];
    let paths = raw
        .iter()
        .map(|nodes| Path::new(nodes.to_vec()).expect("reference paths are simple"))
        .collect();
    PathSet::new(I, J, paths).expect("reference paths share endpoints")
}

pub fn topology() -> AdjacencyList {
    AdjacencyList::from_edges(
        8,
        &[
            (I, K1),
            (I, K2),
            (I, K3),
            (I, K4),
            (K1, J),
            (K1, K5),
            (K5, J),
            (K2, K6),
            (K6, J),
            (K3, K2),
            (K4, K6),
            (K3, K5),
        ],
    )
    .expect("reference topology is in range")
}

pub fn instance() -> (AdjacencyList, PathSet) {
    (topology(), path_set())
}

/// Five type-A pairs and the single type-B pair `(k3, k5)`.
pub fn classification() -> PairClassification {
    let a = |k, k2, paths: &[PathId]| TypeAPair {
        k,
        k2,
        paths: paths.iter().copied().collect(),
    };
    PairClassification {
        type_a: vec![
            a(K1, K5, &[D]),
            a(K1, J, &[A]),
            a(K2, K3, &[C]),
            a(K2, K6, &[B, C]),
            a(K4, K6, &[E]),
        ],
        type_b: vec![TypeBPair { k: K3, k2: K5 }],
    }
}

/// Final conflict edges: a-d, b-c, b-e, c-e, c-d.
pub fn expected_edges() -> BTreeSet<(PathId, PathId)> {
    BTreeSet::from([(A, D), (B, C), (B, E), (C, E), (C, D)])
}
