//! Exact maximum weighted independent set for small graphs.
//!
//! Weights are positive rationals. The solver rescales them to integers over
//! their common denominator, so every comparison is exact, then runs either
//! plain enumeration (small orders) or a depth-first branch and bound whose
//! upper bound comes from a greedy clique cover.
//!
//! Among equally weighty optima the lexicographically smallest sorted index
//! set wins. Branching always takes the lowest undecided vertex and tries
//! "include" before "exclude", which visits candidate sets in exactly that
//! order, so the first optimum reached is the one reported.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

pub type Weight = Ratio<u64>;

/// Hard ceiling imposed by the 64-bit vertex masks.
pub const MAX_SUPPORTED_ORDER: usize = 64;
pub const DEFAULT_BRUTE_FORCE_BELOW: usize = 12;
/// Enumeration is never used beyond this order, whatever the solver says.
const ENUMERATION_CEILING: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum MwisError {
    #[error("graph order {order} exceeds the solver limit of {limit}")]
    Capacity { order: usize, limit: usize },
    #[error("edge ({0}, {1}) references a vertex outside the graph")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("weight of vertex {0} is not strictly positive")]
    NonPositiveWeight(usize),
    #[error("weights overflow the exact integer range after rescaling")]
    WeightOverflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    weights: Vec<Weight>,
    edges: BTreeSet<(usize, usize)>,
}

impl WeightedGraph {
    pub fn new(weights: Vec<Weight>) -> Result<Self, MwisError> {
        if let Some(v) = weights.iter().position(|w| *w.numer() == 0) {
            return Err(MwisError::NonPositiveWeight(v));
        }
        Ok(Self {
            weights,
            edges: BTreeSet::new(),
        })
    }

    pub fn with_edges(
        weights: Vec<Weight>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MwisError> {
        let mut g = Self::new(weights)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), MwisError> {
        if u >= self.order() || v >= self.order() {
            return Err(MwisError::VertexOutOfRange(u, v));
        }
        if u == v {
            return Err(MwisError::SelfLoop(u));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    pub fn total_weight(&self, set: &[usize]) -> Ratio<u128> {
        set.iter()
            .map(|&v| {
                let w = self.weights[v];
                Ratio::new(u128::from(*w.numer()), u128::from(*w.denom()))
            })
            .fold(Ratio::from_integer(0), |acc, w| acc + w)
    }
}

/// An optimal independent set: sorted vertex indices and their exact weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub vertices: Vec<usize>,
    pub weight: Ratio<u128>,
}

#[derive(Debug, Clone, Copy)]
pub struct Solver {
    max_order: usize,
    brute_force_below: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Self {
            max_order: MAX_SUPPORTED_ORDER,
            brute_force_below: DEFAULT_BRUTE_FORCE_BELOW,
        }
    }
}

impl Solver {
    pub fn new(max_order: usize, brute_force_below: usize) -> Result<Self, MwisError> {
        if max_order > MAX_SUPPORTED_ORDER {
            return Err(MwisError::Capacity {
                order: max_order,
                limit: MAX_SUPPORTED_ORDER,
            });
        }
        Ok(Self {
            max_order,
            brute_force_below,
        })
    }

    pub fn solve(&self, g: &WeightedGraph) -> Result<Selection, MwisError> {
        let n = g.order();
        if n > self.max_order {
            return Err(MwisError::Capacity {
                order: n,
                limit: self.max_order,
            });
        }
        let (scaled, denom) = scale_weights(g.weights())?;
        let mut nbr = vec![0u64; n];
        for &(u, v) in g.edges() {
            nbr[u] |= 1 << v;
            nbr[v] |= 1 << u;
        }
        let mask = if n < self.brute_force_below.min(ENUMERATION_CEILING) {
            enumerate(&nbr, &scaled)
        } else {
            let mut bb = BranchAndBound {
                nbr: &nbr,
                weight: &scaled,
                best: None,
            };
            let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            bb.search(all, 0, 0);
            bb.best.map_or(0, |(m, _)| m)
        };
        let vertices: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let total: u128 = vertices.iter().map(|&v| scaled[v]).sum();
        Ok(Selection {
            vertices,
            weight: Ratio::new(total, denom),
        })
    }
}

/// Solves with the default solver settings.
pub fn solve(g: &WeightedGraph) -> Result<Selection, MwisError> {
    Solver::default().solve(g)
}

/// Integer weights over a common denominator, with headroom for the total.
fn scale_weights(weights: &[Weight]) -> Result<(Vec<u128>, u128), MwisError> {
    let mut lcm: u128 = 1;
    for w in weights {
        let d = u128::from(*w.denom());
        let g = lcm.gcd(&d);
        lcm = (lcm / g).checked_mul(d).ok_or(MwisError::WeightOverflow)?;
    }
    let mut total: u128 = 0;
    let scaled = weights
        .iter()
        .map(|w| {
            let s = u128::from(*w.numer())
                .checked_mul(lcm / u128::from(*w.denom()))
                .ok_or(MwisError::WeightOverflow)?;
            total = total.checked_add(s).ok_or(MwisError::WeightOverflow)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((scaled, lcm))
}

/// Is `a` lexicographically smaller than `b` as sorted index sequences?
fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let low = (a ^ b).trailing_zeros();
    let below = (1u64 << low) - 1;
    if a >> low & 1 == 1 {
        // `a` has the first differing element; `b` continues with a larger
        // one unless it ends right here.
        b & !below != 0
    } else {
        a & !below == 0
    }
}

fn enumerate(nbr: &[u64], weight: &[u128]) -> u64 {
    let n = nbr.len();
    let mut best = (0u64, 0u128);
    for mask in 0..(1u64 << n) {
        let independent = (0..n).all(|v| mask >> v & 1 == 0 || nbr[v] & mask == 0);
        if !independent {
            continue;
        }
        let w: u128 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| weight[v]).sum();
        if w > best.1 || (w == best.1 && lex_less(mask, best.0)) {
            best = (mask, w);
        }
    }
    best.0
}

struct BranchAndBound<'a> {
    nbr: &'a [u64],
    weight: &'a [u128],
    best: Option<(u64, u128)>,
}

impl BranchAndBound<'_> {
    /// Sum over a greedy clique cover of the heaviest vertex per clique.
    fn clique_cover_bound(&self, mut cand: u64) -> u128 {
        let mut bound = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            let mut common = self.nbr[v] & cand;
            let mut heaviest = self.weight[v];
            while common != 0 {
                let u = common.trailing_zeros() as usize;
                clique |= 1 << u;
                common &= self.nbr[u];
                heaviest = heaviest.max(self.weight[u]);
            }
            bound += heaviest;
            cand &= !clique;
        }
        bound
    }

    fn search(&mut self, cand: u64, chosen: u64, weight: u128) {
        if cand == 0 {
            if self.best.is_none_or(|(_, w)| weight > w) {
                self.best = Some((chosen, weight));
            }
            return;
        }
        if let Some((_, best)) = self.best {
            // Anything found later in this order only ties by being
            // lexicographically larger, so equality is enough to prune.
            if weight + self.clique_cover_bound(cand) <= best {
                return;
            }
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        self.search(cand & !bit & !self.nbr[v], chosen | bit, weight + self.weight[v]);
        self.search(cand & !bit, chosen, weight);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: u64, d: u64) -> Weight {
        Weight::new(n, d)
    }

    fn both(g: &WeightedGraph) -> (Selection, Selection) {
        let bf = Solver::new(64, 65).unwrap().solve(g).unwrap();
        let bb = Solver::new(64, 0).unwrap().solve(g).unwrap();
        (bf, bb)
    }

    #[test]
    fn empty_graph() {
        let g = WeightedGraph::new(vec![]).unwrap();
        let s = solve(&g).unwrap();
        assert!(s.vertices.is_empty());
        assert_eq!(s.weight, Ratio::from_integer(0));
    }

    #[test]
    fn edgeless_takes_everything() {
        let g = WeightedGraph::new(vec![w(1, 2), w(1, 3), w(2, 1)]).unwrap();
        for s in [both(&g).0, both(&g).1] {
            assert_eq!(s.vertices, vec![0, 1, 2]);
            assert_eq!(s.weight, Ratio::new(17, 6));
        }
    }

    #[test]
    fn heavy_middle_of_path() {
        // Subsets of {0,1,2} that are independent on 0-1-2: {}, {0}, {1},
        // {2}, {0,2} with weights 0, 1, 3, 1, 2.
        let g = WeightedGraph::with_edges(vec![w(1, 1), w(3, 1), w(1, 1)], [(0, 1), (1, 2)]).unwrap();
        for s in [both(&g).0, both(&g).1] {
            assert_eq!(s.vertices, vec![1]);
            assert_eq!(s.weight, Ratio::from_integer(3));
        }
    }

    #[test]
    fn ties_prefer_lexicographically_smallest() {
        // Triangle with equal weights: {0}, {1}, {2} all optimal.
        let g = WeightedGraph::with_edges(vec![w(1, 1); 3], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(both(&g).0.vertices, vec![0]);
        assert_eq!(both(&g).1.vertices, vec![0]);
        // {0,3} vs {1,2}: equal weight, {0,3} first.
        let g = WeightedGraph::with_edges(vec![w(1, 1); 4], [(0, 1), (0, 2), (3, 1), (3, 2)]).unwrap();
        assert_eq!(both(&g).0.vertices, vec![0, 3]);
        assert_eq!(both(&g).1.vertices, vec![0, 3]);
    }

    #[test]
    fn lex_order_helper() {
        assert!(lex_less(0b0011, 0b0101)); // {0,1} < {0,2}
        assert!(lex_less(0b1001, 0b0110)); // {0,3} < {1,2}
        assert!(lex_less(0b0001, 0b0011)); // {0} < {0,1}
        assert!(!lex_less(0b0011, 0b0001));
        assert!(lex_less(0, 0b1));
        assert!(!lex_less(0b10, 0b10));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            WeightedGraph::new(vec![w(1, 1), w(0, 1)]),
            Err(MwisError::NonPositiveWeight(1))
        );
        let mut g = WeightedGraph::new(vec![w(1, 1); 2]).unwrap();
        assert_eq!(g.add_edge(0, 0), Err(MwisError::SelfLoop(0)));
        assert_eq!(g.add_edge(0, 2), Err(MwisError::VertexOutOfRange(0, 2)));
        let big = WeightedGraph::new(vec![w(1, 1); 65]).unwrap();
        assert_eq!(
            solve(&big),
            Err(MwisError::Capacity { order: 65, limit: 64 })
        );
        let small = Solver::new(4, 2).unwrap();
        assert!(matches!(
            small.solve(&WeightedGraph::new(vec![w(1, 1); 5]).unwrap()),
            Err(MwisError::Capacity { order: 5, limit: 4 })
        ));
        assert!(Solver::new(65, 2).is_err());
    }

    #[test]
    fn full_order_sixty_four_is_supported() {
        // A perfect matching on 64 vertices; the first of each pair is heavier.
        let weights: Vec<Weight> = (0..64).map(|v| if v % 2 == 0 { w(2, 1) } else { w(1, 1) }).collect();
        let g = WeightedGraph::with_edges(weights, (0..32).map(|k| (2 * k, 2 * k + 1))).unwrap();
        let s = solve(&g).unwrap();
        assert_eq!(s.vertices, (0..64).step_by(2).collect::<Vec<_>>());
        assert_eq!(s.weight, Ratio::from_integer(64));
    }

    #[test]
    fn overflow_is_reported() {
        let primes = [
            4_294_967_291u64,
            4_294_967_279,
            4_294_967_231,
            4_294_967_197,
            4_294_967_189,
        ];
        let g = WeightedGraph::new(primes.iter().map(|&p| w(1, p)).collect()).unwrap();
        assert_eq!(solve(&g), Err(MwisError::WeightOverflow));
    }
}
