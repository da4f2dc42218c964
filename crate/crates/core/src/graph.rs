//! Minimal undirected-graph abstraction shared by routing, refinement and
//! scheduling.
//!
//! Everything downstream of topology generation only needs neighbor lists, so
//! the algorithms are written against [`Adjacency`] rather than the geometric
//! [`Network`](crate::topology::Network). Hand-built instances (and the
//! access-auditing double used in tests) implement the same trait.

pub type NodeId = usize;

pub trait Adjacency {
    fn node_count(&self) -> usize;

    /// Neighbors of `u`, sorted ascending, never containing `u`.
    fn neighbors(&self, u: NodeId) -> &[NodeId];

    fn is_neighbor(&self, u: NodeId, v: NodeId) -> bool {
        u != v && self.neighbors(u).binary_search(&v).is_ok()
    }
}

impl<T: Adjacency + ?Sized> Adjacency for &T {
    fn node_count(&self) -> usize {
        (**self).node_count()
    }

    fn neighbors(&self, u: NodeId) -> &[NodeId] {
        (**self).neighbors(u)
    }

    fn is_neighbor(&self, u: NodeId, v: NodeId) -> bool {
        (**self).is_neighbor(u, v)
    }
}

/// Plain adjacency-list graph with no geometry attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyList {
    adj: Vec<Vec<NodeId>>,
}

impl AdjacencyList {
    /// Builds an undirected graph on `n` nodes. Self-loops and duplicate edges
    /// are ignored; an endpoint `>= n` yields `None`.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Option<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return None;
            }
            if u == v {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Some(Self { adj })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

impl Adjacency for AdjacencyList {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u]
    }
}
