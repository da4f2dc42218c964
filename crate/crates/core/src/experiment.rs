//! Sweeps comparing original and refined path sets.
//!
//! A sweep generates `networks` meshes, `od_sets_per_network` origin-
//! destination sets per mesh, and for every pair-density point and routing
//! method simulates the union of original paths and the union of refined
//! paths. Each result row carries a [`SeedLineage`] from which
//! [`replay`] regenerates it bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, NodeId};
use crate::metrics::{self, MeanCi};
use crate::refine::{refine, ConfiguredRoutes, Decision};
use crate::rng::{derive_seed, stream_rng, Stream};
use crate::routing::{PathSet, RoutingConfig, RoutingMethod};
use crate::scheduler::{simulate_tdma, SimConfig, SimError, SCHEDULER_NAME};
use crate::topology::{generate_network, GenerationConfig, Network, TopologyError, DEFAULT_SIDE};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: [&str; 10] = [
    "n",
    "delta",
    "theta",
    "method",
    "refined",
    "throughput_pps",
    "sigma",
    "fairness_paths",
    "fairness_od",
    "seed_path",
];

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid pair density {0:?}")]
    InvalidTheta(String),
    #[error("invalid seed lineage {0:?}")]
    InvalidLineage(String),
    #[error("{0}")]
    Instance(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Origin-destination pairs; no node is the origin of two pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdSet {
    pub pairs: Vec<(NodeId, NodeId)>,
}

impl OdSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// OD set number `index` for a network: every node is an origin once, in a
/// shuffled order, with a destination drawn uniformly among the others.
pub fn gen_od_set(net: &impl Adjacency, seed: u64, index: u64) -> Result<OdSet, ExperimentError> {
    let n = net.node_count();
    if n < 2 {
        return Err(ExperimentError::InvalidArgument(format!(
            "OD sets need at least 2 nodes, network has {n}"
        )));
    }
    let mut rng = stream_rng(seed, Stream::OdSelection, index);
    let mut origins: Vec<NodeId> = (0..n).collect();
    origins.shuffle(&mut rng);
    let pairs = origins
        .into_iter()
        .map(|o| {
            let d = rng.gen_range(0..n - 1);
            (o, if d >= o { d + 1 } else { d })
        })
        .collect();
    Ok(OdSet { pairs })
}

pub fn gen_od_sets(net: &impl Adjacency, count: usize, seed: u64) -> Result<Vec<OdSet>, ExperimentError> {
    (0..count as u64).map(|c| gen_od_set(net, seed, c)).collect()
}

/// Pair density `|OD| / n` as an exact fraction in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Theta(Ratio<u64>);

impl Theta {
    pub fn new(numer: u64, denom: u64) -> Result<Self, ExperimentError> {
        if denom == 0 || numer == 0 || numer > denom {
            return Err(ExperimentError::InvalidTheta(format!("{numer}/{denom}")));
        }
        Ok(Self(Ratio::new(numer, denom)))
    }

    pub fn one() -> Self {
        Self(Ratio::from_integer(1))
    }

    pub fn as_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// `ceil(theta * n)`, at least 1 when `n > 0`.
    pub fn pair_count(&self, n: usize) -> usize {
        let num = *self.0.numer() as u128 * n as u128;
        let count = num.div_ceil(*self.0.denom() as u128) as usize;
        count.clamp(n.min(1), n)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Theta {
    type Err = ExperimentError;

    /// Accepts `p/q` fractions and plain decimals such as `0.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ExperimentError::InvalidTheta(s.to_string());
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = p.trim().parse().map_err(|_| err())?;
            let q = q.trim().parse().map_err(|_| err())?;
            return Theta::new(p, q).map_err(|_| err());
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if frac_part.len() > 12 || (int_part.is_empty() && frac_part.is_empty()) {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let numer: u64 = digits.parse().map_err(|_| err())?;
        Theta::new(numer, 10u64.pow(frac_part.len() as u32)).map_err(|_| err())
    }
}

impl Serialize for Theta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Theta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The first `ceil(theta * |od|)` pairs of a seeded permutation of `od`,
/// returned in their original order. Subsets for the same seed are nested.
pub fn theta_subset(od: &OdSet, theta: Theta, seed: u64) -> OdSet {
    let mut order: Vec<usize> = (0..od.len()).collect();
    order.shuffle(&mut stream_rng(seed, Stream::Grouping, 0));
    let mut keep: Vec<usize> = order[..theta.pair_count(od.len())].to_vec();
    keep.sort_unstable();
    OdSet {
        pairs: keep.into_iter().map(|i| od.pairs[i]).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefinementMode {
    Off,
    On,
    Both,
}

impl FromStr for RefinementMode {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "off" => Ok(Self::Off),
            "on" => Ok(Self::On),
            "both" => Ok(Self::Both),
            _ => Err(ExperimentError::InvalidArgument(format!(
                "refinement must be on, off or both, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub delta: usize,
    pub side: f64,
    pub networks: usize,
    pub od_sets_per_network: usize,
    pub theta_points: Vec<Theta>,
    pub methods: Vec<RoutingConfig>,
    pub refinement: RefinementMode,
    pub sim: SimConfig,
    pub seed: u64,
}

impl SweepConfig {
    /// One network, one OD set, full pair density, the two multi-path
    /// proxies with their default path budgets.
    pub fn new(n: usize, delta: usize, seed: u64) -> Self {
        Self {
            n,
            delta,
            side: DEFAULT_SIDE,
            networks: 1,
            od_sets_per_network: 1,
            theta_points: vec![Theta::one()],
            methods: vec![
                RoutingConfig::with_default_k(RoutingMethod::KDisjoint, delta),
                RoutingConfig::with_default_k(RoutingMethod::MprKDisjoint, delta),
            ],
            refinement: RefinementMode::Both,
            sim: SimConfig::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidArgument(m));
        GenerationConfig::new(self.n, self.delta, self.seed)
            .with_side(self.side)
            .validate()?;
        if self.theta_points.is_empty() {
            return bad("at least one theta point is required".into());
        }
        if self.methods.is_empty() {
            return bad("at least one routing method is required".into());
        }
        if self.methods.iter().any(|m| m.k_max == 0) {
            return bad("k_max must be at least 1".into());
        }
        self.sim.validate()?;
        Ok(())
    }

    pub fn network_seed(&self, network: usize) -> u64 {
        derive_seed(self.seed, Stream::Network, network as u64)
    }

    pub fn generation_config(&self, network: usize) -> GenerationConfig {
        GenerationConfig::new(self.n, self.delta, self.network_seed(network)).with_side(self.side)
    }

    /// Expected row count when nothing fails.
    pub fn expected_rows(&self) -> usize {
        let per = match self.refinement {
            RefinementMode::Both => 2,
            _ => 1,
        };
        self.networks * self.od_sets_per_network * self.theta_points.len() * self.methods.len() * per
    }
}

/// Coordinates of one sweep instance, enough to regenerate it from the
/// sweep's base seed. Printed as `seed:netN:odM:thetaP/Q:METHOD:kK`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedLineage {
    pub seed: u64,
    pub network: usize,
    pub od_set: usize,
    pub theta: Theta,
    pub routing: RoutingConfig,
}

impl fmt::Display for SeedLineage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:net{}:od{}:theta{}:{}:k{}",
            self.seed, self.network, self.od_set, self.theta, self.routing.method, self.routing.k_max
        )
    }
}

impl FromStr for SeedLineage {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ExperimentError::InvalidLineage(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [seed, net, od, theta, method, k] = parts.as_slice() else {
            return Err(err());
        };
        let field = |v: &str, prefix: &str| -> Result<usize, ExperimentError> {
            v.strip_prefix(prefix).ok_or_else(err)?.parse().map_err(|_| err())
        };
        let method: RoutingMethod = method.parse().map_err(|_| err())?;
        Ok(Self {
            seed: seed.parse().map_err(|_| err())?,
            network: field(net, "net")?,
            od_set: field(od, "od")?,
            theta: theta.strip_prefix("theta").ok_or_else(err)?.parse()?,
            routing: RoutingConfig::new(method, field(k, "k")?).map_err(|_| err())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub n: usize,
    pub delta: usize,
    pub theta: Theta,
    pub method: RoutingMethod,
    pub k_max: usize,
    pub refined: bool,
    pub packets_per_slot: f64,
    pub throughput_pps: f64,
    pub sigma: Option<f64>,
    pub fairness_paths: Option<f64>,
    pub fairness_od: Option<f64>,
    /// Mean number of paths per active OD pair.
    pub paths_per_pair: f64,
    pub zero_traffic_pairs: usize,
    #[serde(serialize_with = "serialize_display")]
    pub lineage: SeedLineage,
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceFailure {
    pub instance: String,
    pub message: String,
}

/// How many conflict-graph selections were checked for independence and how
/// many failed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SoundnessAudit {
    pub checked: usize,
    pub violations: usize,
}

impl SoundnessAudit {
    fn merge(&mut self, other: SoundnessAudit) {
        self.checked += other.checked;
        self.violations += other.violations;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<InstanceFailure>,
    pub soundness: SoundnessAudit,
}

/// Original and refined path sets of every pair of an OD set, computed once
/// and shared by all pair-density points.
struct PairRoutes {
    original: Vec<PathSet>,
    refined: Vec<PathSet>,
    soundness: SoundnessAudit,
}

fn route_pairs(
    net: &Network,
    pairs: &[(NodeId, NodeId)],
    routing: RoutingConfig,
    with_refinement: bool,
) -> Result<PairRoutes, ExperimentError> {
    let source = ConfiguredRoutes {
        net,
        config: routing,
    };
    let mut out = PairRoutes {
        original: Vec::with_capacity(pairs.len()),
        refined: Vec::with_capacity(pairs.len()),
        soundness: SoundnessAudit::default(),
    };
    for &(i, j) in pairs {
        let ps = routing.route(net, i, j);
        if with_refinement {
            if ps.is_empty() {
                out.refined.push(ps.clone());
            } else {
                let r = refine(net, &ps, &source)
                    .map_err(|e| ExperimentError::Instance(format!("refine ({i},{j}): {e}")))?;
                if let Decision::Selected { .. } = r.decision {
                    out.soundness.checked += 1;
                    if !r.is_sound() {
                        out.soundness.violations += 1;
                    }
                }
                out.refined.push(r.refined);
            }
        }
        out.original.push(ps);
    }
    Ok(out)
}

struct Measured {
    per_slot: num_rational::BigRational,
    fairness_paths: Option<f64>,
    fairness_od: Option<f64>,
    paths_per_pair: f64,
    zero_pairs: usize,
}

fn measure(net: &Network, active: &[PathSet], sim: &SimConfig) -> Result<Measured, ExperimentError> {
    let stats = simulate_tdma(net, active, sim).map_err(|e| ExperimentError::Instance(e.to_string()))?;
    let per_slot = metrics::throughput(&stats).map_err(|e| ExperimentError::Instance(e.to_string()))?;
    let path_count: usize = active.iter().map(PathSet::len).sum();
    Ok(Measured {
        per_slot,
        fairness_paths: metrics::fairness_paths(&stats.per_path).ok().map(|f| metrics::to_f64(&f)),
        fairness_od: metrics::fairness_od(&stats.od_counts()).ok().map(|f| metrics::to_f64(&f)),
        paths_per_pair: if active.is_empty() {
            0.0
        } else {
            path_count as f64 / active.len() as f64
        },
        zero_pairs: metrics::zero_traffic_pairs(&stats),
    })
}

/// All rows for one (network, OD set, method) across the requested densities.
fn evaluate_unit(
    cfg: &SweepConfig,
    net: &Network,
    od: &OdSet,
    network: usize,
    od_set: usize,
    routing: RoutingConfig,
    thetas: &[Theta],
) -> Result<(Vec<RunRecord>, SoundnessAudit), ExperimentError> {
    let with_refinement = cfg.refinement != RefinementMode::Off;
    let group_seed = derive_seed(cfg.network_seed(network), Stream::Grouping, od_set as u64);
    let subsets: Vec<OdSet> = thetas.iter().map(|&t| theta_subset(od, t, group_seed)).collect();
    // Nested subsets: the largest one covers every pair that is ever needed.
    let needed: Vec<(NodeId, NodeId)> = subsets
        .iter()
        .max_by_key(|s| s.len())
        .map(|s| s.pairs.clone())
        .unwrap_or_default();
    let routes = route_pairs(net, &needed, routing, with_refinement)?;
    let index: BTreeMap<(NodeId, NodeId), usize> =
        needed.iter().enumerate().map(|(x, &p)| (p, x)).collect();

    let mut rows = Vec::new();
    for (&theta, subset) in thetas.iter().zip(&subsets) {
        let pick = |sets: &[PathSet]| -> Vec<PathSet> {
            subset.pairs.iter().map(|p| sets[index[p]].clone()).collect()
        };
        let lineage = SeedLineage {
            seed: cfg.seed,
            network,
            od_set,
            theta,
            routing,
        };
        let row = |m: &Measured, refined: bool, sigma: Option<f64>| RunRecord {
            n: cfg.n,
            delta: cfg.delta,
            theta,
            method: routing.method,
            k_max: routing.k_max,
            refined,
            packets_per_slot: metrics::to_f64(&m.per_slot),
            throughput_pps: metrics::to_f64(&m.per_slot) / cfg.sim.slot_seconds,
            sigma,
            fairness_paths: m.fairness_paths,
            fairness_od: m.fairness_od,
            paths_per_pair: m.paths_per_pair,
            zero_traffic_pairs: m.zero_pairs,
            lineage,
        };

        let original = measure(net, &pick(&routes.original), &cfg.sim)?;
        if cfg.refinement != RefinementMode::On {
            rows.push(row(&original, false, None));
        }
        if with_refinement {
            let refined = measure(net, &pick(&routes.refined), &cfg.sim)?;
            let sigma = metrics::sigma(&refined.per_slot, &original.per_slot)
                .ok()
                .map(|s| metrics::to_f64(&s));
            rows.push(row(&refined, true, sigma));
        }
    }
    Ok((rows, routes.soundness))
}

/// Runs the whole sweep. Instances fail independently; their errors are
/// collected instead of aborting. Rows come back ordered by
/// (network, OD set, theta, method, refined) whatever the thread schedule.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, ExperimentError> {
    cfg.validate()?;

    let generated: Vec<Result<(Network, Vec<OdSet>), String>> = (0..cfg.networks)
        .into_par_iter()
        .map(|k| {
            let net = generate_network(&cfg.generation_config(k)).map_err(|e| e.to_string())?;
            let ods = gen_od_sets(&net, cfg.od_sets_per_network, cfg.network_seed(k))
                .map_err(|e| e.to_string())?;
            Ok((net, ods))
        })
        .collect();

    let mut failures = Vec::new();
    let mut units = Vec::new();
    for (k, g) in generated.iter().enumerate() {
        match g {
            Ok((net, ods)) => {
                for (o, od) in ods.iter().enumerate() {
                    for (m, &routing) in cfg.methods.iter().enumerate() {
                        units.push((k, o, m, routing, net, od));
                    }
                }
            }
            Err(msg) => failures.push(InstanceFailure {
                instance: format!("{}:net{k}", cfg.seed),
                message: msg.clone(),
            }),
        }
    }

    let results: Vec<_> = units
        .par_iter()
        .map(|&(k, o, m, routing, net, od)| {
            (
                (k, o, m, routing),
                evaluate_unit(cfg, net, od, k, o, routing, &cfg.theta_points),
            )
        })
        .collect();

    let mut keyed = Vec::new();
    let mut soundness = SoundnessAudit::default();
    for ((k, o, m, routing), res) in results {
        match res {
            Ok((rows, audit)) => {
                soundness.merge(audit);
                for (pos, r) in rows.into_iter().enumerate() {
                    let per_theta = if cfg.refinement == RefinementMode::Both { 2 } else { 1 };
                    keyed.push(((k, o, pos / per_theta, m, r.refined), r));
                }
            }
            Err(e) => failures.push(InstanceFailure {
                instance: format!("{}:net{k}:od{o}:{}:k{}", cfg.seed, routing.method, routing.k_max),
                message: e.to_string(),
            }),
        }
    }
    keyed.sort_by_key(|a| a.0);
    Ok(SweepOutcome {
        records: keyed.into_iter().map(|(_, r)| r).collect(),
        failures,
        soundness,
    })
}

/// Regenerates the rows of a single lineage (original and/or refined, per
/// `cfg.refinement`) without running the rest of the sweep.
pub fn replay(cfg: &SweepConfig, lineage: &SeedLineage) -> Result<Vec<RunRecord>, ExperimentError> {
    cfg.validate()?;
    if lineage.seed != cfg.seed {
        return Err(ExperimentError::InvalidLineage(format!(
            "lineage seed {} does not match sweep seed {}",
            lineage.seed, cfg.seed
        )));
    }
    let net = generate_network(&cfg.generation_config(lineage.network))
        .map_err(|e| ExperimentError::Instance(e.to_string()))?;
    let od = gen_od_set(&net, cfg.network_seed(lineage.network), lineage.od_set as u64)?;
    evaluate_unit(
        cfg,
        &net,
        &od,
        lineage.network,
        lineage.od_set,
        lineage.routing,
        &[lineage.theta],
    )
    .map(|(rows, _)| rows)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the documented CSV layout, one row per record.
pub fn write_csv<W: std::io::Write>(out: W, records: &[RunRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.delta.to_string(),
            r.theta.as_f64().to_string(),
            r.method.to_string(),
            r.refined.to_string(),
            r.throughput_pps.to_string(),
            opt(r.sigma),
            opt(r.fairness_paths),
            opt(r.fairness_od),
            r.lineage.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaSummary {
    pub method: RoutingMethod,
    pub k_max: usize,
    pub sigma: Option<MeanCi>,
    /// Whether the mean refined/original ratio exceeds 1.
    pub improves: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: SweepConfig,
    pub scheduler: &'static str,
    pub substitutions: Vec<&'static str>,
    pub rows: usize,
    pub expected_rows: usize,
    pub failures: Vec<InstanceFailure>,
    pub selection_soundness: SoundnessAudit,
    pub sigma_summary: Vec<SigmaSummary>,
    /// `"METHOD/original"` or `"METHOD/refined"` -> (zero-traffic OD pairs
    /// per run -> number of runs).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_traffic_histogram: Option<BTreeMap<String, BTreeMap<usize, usize>>>,
    pub notes: Vec<String>,
}

pub const SUBSTITUTIONS: [&str; 4] = [
    "routing: deterministic graph proxies (SPA for AODV, K_DISJOINT for AOMDV, MPR_SPA for OLSR, MPR_K_DISJOINT for MP-OLSR)",
    "scheduling: greedy longest-queue-first TDMA over the protocol-interference link conflict graph",
    "queues: first-hop queues capped at queue_cap with drops at injection; interior queues uncapped",
    "k_max: upper bound on paths for both multi-path proxies; disjoint extraction may find fewer",
];

impl Manifest {
    pub fn new(cfg: &SweepConfig, outcome: &SweepOutcome, zero_histogram: bool) -> Self {
        let sigma_summary = cfg
            .methods
            .iter()
            .map(|m| {
                let samples: Vec<f64> = outcome
                    .records
                    .iter()
                    .filter(|r| r.method == m.method && r.k_max == m.k_max)
                    .filter_map(|r| r.sigma)
                    .collect();
                let ci = MeanCi::from_samples(&samples);
                SigmaSummary {
                    method: m.method,
                    k_max: m.k_max,
                    improves: ci.map(|c| c.mean > 1.0),
                    sigma: ci,
                }
            })
            .collect::<Vec<_>>();
        let histogram = zero_histogram.then(|| {
            let mut h: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
            for r in &outcome.records {
                let key = format!("{}/{}", r.method, if r.refined { "refined" } else { "original" });
                *h.entry(key).or_default().entry(r.zero_traffic_pairs).or_default() += 1;
            }
            h
        });
        let mut notes = Vec::new();
        for s in &sigma_summary {
            if s.improves == Some(false) {
                notes.push(format!(
                    "mean sigma for {} did not exceed 1; selection soundness audit: {} checked, {} violations",
                    s.method, outcome.soundness.checked, outcome.soundness.violations
                ));
            }
        }
        Self {
            schema_version: MANIFEST_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            config: cfg.clone(),
            scheduler: SCHEDULER_NAME,
            substitutions: SUBSTITUTIONS.to_vec(),
            rows: outcome.records.len(),
            expected_rows: cfg.expected_rows(),
            failures: outcome.failures.clone(),
            selection_soundness: outcome.soundness,
            sigma_summary,
            zero_traffic_histogram: histogram,
            notes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AdjacencyList;
    use std::collections::BTreeSet;

    fn complete(n: usize) -> AdjacencyList {
        let edges: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        AdjacencyList::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn od_sets_have_unique_origins() {
        let net = complete(120);
        let sets = gen_od_sets(&net, 100, 5).unwrap();
        assert_eq!(sets.len(), 100);
        for s in &sets {
            assert_eq!(s.len(), 120);
            let origins: BTreeSet<_> = s.pairs.iter().map(|p| p.0).collect();
            assert_eq!(origins.len(), 120);
            assert!(s.pairs.iter().all(|(o, d)| o != d && *d < 120));
        }
        assert_eq!(sets, gen_od_sets(&net, 100, 5).unwrap());
        assert_ne!(sets, gen_od_sets(&net, 100, 6).unwrap());
    }

    #[test]
    fn od_sets_need_two_nodes() {
        let one = AdjacencyList::from_edges(1, &[]).unwrap();
        assert!(gen_od_sets(&one, 1, 0).is_err());
    }

    #[test]
    fn theta_parsing() {
        assert_eq!("0.25".parse::<Theta>().unwrap(), Theta::new(1, 4).unwrap());
        assert_eq!("1/60".parse::<Theta>().unwrap(), Theta::new(1, 60).unwrap());
        assert_eq!("1".parse::<Theta>().unwrap(), Theta::one());
        assert_eq!("1.0".parse::<Theta>().unwrap(), Theta::one());
        for bad in ["0", "1.5", "-0.5", "abc", "2/1", "1/0", ""] {
            assert!(bad.parse::<Theta>().is_err(), "{bad}");
        }
    }

    #[test]
    fn theta_subsets() {
        let net = complete(60);
        let od = gen_od_set(&net, 1, 0).unwrap();
        assert_eq!(theta_subset(&od, Theta::one(), 9), od);
        assert_eq!(theta_subset(&od, Theta::new(1, 60).unwrap(), 9).len(), 1);
        assert_eq!(theta_subset(&od, Theta::new(1, 7).unwrap(), 9).len(), 9);
        let quarter: BTreeSet<_> = theta_subset(&od, Theta::new(1, 4).unwrap(), 9).pairs.into_iter().collect();
        let half: BTreeSet<_> = theta_subset(&od, Theta::new(1, 2).unwrap(), 9).pairs.into_iter().collect();
        assert_eq!(quarter.len(), 15);
        assert!(quarter.is_subset(&half));
    }

    #[test]
    fn lineage_round_trip() {
        let l = SeedLineage {
            seed: 42,
            network: 3,
            od_set: 7,
            theta: Theta::new(3, 8).unwrap(),
            routing: RoutingConfig::new(RoutingMethod::MprKDisjoint, 3).unwrap(),
        };
        let s = l.to_string();
        assert_eq!(s, "42:net3:od7:theta3/8:MPR_K_DISJOINT:k3");
        assert_eq!(s.parse::<SeedLineage>().unwrap(), l);
        assert!("42:net3:od7".parse::<SeedLineage>().is_err());
    }

    fn small_cfg() -> SweepConfig {
        let mut cfg = SweepConfig::new(20, 8, 11);
        cfg.sim = SimConfig {
            total_slots: 400,
            warmup_slots: 100,
            ..SimConfig::default()
        };
        cfg
    }

    #[test]
    fn minimal_sweep_shapes() {
        let cfg = small_cfg();
        let out = run_sweep(&cfg).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.records.len(), 4);
        assert_eq!(out.records.len(), cfg.expected_rows());
        assert!(!out.records[0].refined && out.records[1].refined);
        assert!(out.records[0].sigma.is_none());
        assert!(out.records[1].sigma.is_some());

        let mut off = small_cfg();
        off.refinement = RefinementMode::Off;
        let out = run_sweep(&off).unwrap();
        assert_eq!(out.records.len(), 2);
        assert!(out.records.iter().all(|r| r.sigma.is_none() && !r.refined));
    }

    #[test]
    fn row_count_formula_and_order() {
        let mut cfg = small_cfg();
        cfg.networks = 2;
        cfg.od_sets_per_network = 2;
        cfg.theta_points = vec![Theta::new(1, 4).unwrap(), Theta::one()];
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 2 * 2 * 2 * 2 * 2);
        let keys: Vec<_> = out
            .records
            .iter()
            .map(|r| (r.lineage.network, r.lineage.od_set, r.theta, r.method, r.refined))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn generation_failures_are_collected() {
        let mut cfg = small_cfg();
        cfg.n = 2;
        cfg.delta = 1;
        cfg.side = 10.0;
        let out = run_sweep(&cfg).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.failures.len(), 1);
    }

    #[test]
    fn csv_layout() {
        let out = run_sweep(&small_cfg()).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &out.records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,delta,theta,method,refined,throughput_pps,sigma,fairness_paths,fairness_od,seed_path"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 10);
        assert_eq!(first[3], "K_DISJOINT");
        assert_eq!(first[6], "");
    }

    #[test]
    fn manifest_carries_substitutions() {
        let cfg = small_cfg();
        let out = run_sweep(&cfg).unwrap();
        let m = Manifest::new(&cfg, &out, true);
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["scheduler"], "greedy-tdma");
        assert_eq!(json["schema_version"], 1);
        assert!(json["zero_traffic_histogram"].is_object());
        assert_eq!(json["config"]["theta_points"][0], "1");
    }
}
