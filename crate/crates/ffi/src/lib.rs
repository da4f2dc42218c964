//! C ABI over `mra-core`.
//!
//! Every fallible function returns an [`MraStatus`]; on failure a message is
//! kept per thread and can be read with [`mra_last_error_message`]. Networks
//! and path sets are opaque handles owned by the caller and released with
//! their `_free` functions. Strings returned through `char **` are released
//! with [`mra_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mra_core::metrics;
use mra_core::mwis::{self, Weight, WeightedGraph};
use mra_core::refine::{refine, ConfiguredRoutes};
use mra_core::routing::{PathSetDocument, RoutingConfig, RoutingMethod};
use mra_core::scheduler::{simulate_tdma, SimConfig};
use mra_core::topology::{comm_radius, generate_network, GenerationConfig, Network};
use mra_core::{Adjacency, PathSet};
use num_rational::Ratio;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MraStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GenerationFailed = 3,
    ParseError = 4,
    RoutingError = 5,
    RefineError = 6,
    SolverError = 7,
    SimulationError = 8,
    MetricsError = 9,
    Panic = 10,
}

/// Opaque mesh handle.
pub struct MraNetwork(Network);

/// Opaque path-set handle; remembers the routing setup that produced it so
/// refinement can enlarge single paths the same way.
pub struct MraPathSet {
    paths: PathSet,
    config: RoutingConfig,
    // Node lists exposed through `mra_path_set_path`.
    nodes: Vec<Vec<usize>>,
}

impl MraPathSet {
    fn new(paths: PathSet, config: RoutingConfig) -> Self {
        let nodes = paths.paths().iter().map(|p| p.nodes().to_vec()).collect();
        Self {
            paths,
            config,
            nodes,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: MraStatus, msg: impl Into<String>) -> MraStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> MraStatus) -> MraStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(MraStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, MraStatus> {
    if p.is_null() {
        return Err(fail(MraStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(MraStatus::InvalidArgument, "string argument is not UTF-8"))
}

/// Caller has checked `p` for NULL whenever `len > 0`.
unsafe fn slice<'a, T>(p: *const T, len: usize) -> &'a [T] {
    if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(p, len)
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> MraStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            MraStatus::Ok
        }
        Err(_) => fail(MraStatus::InvalidArgument, "output contains a NUL byte"),
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(MraStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn mra_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn mra_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn mra_comm_radius(n: usize, delta: usize, out: *mut f64) -> MraStatus {
    guard(|| {
        nonnull!(out);
        match comm_radius(n, delta) {
            Ok(r) => {
                *out = r;
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::InvalidArgument, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn mra_network_generate(
    n: usize,
    delta: usize,
    seed: u64,
    out: *mut *mut MraNetwork,
) -> MraStatus {
    guard(|| {
        nonnull!(out);
        let cfg = GenerationConfig::new(n, delta, seed);
        if let Err(e) = cfg.validate() {
            return fail(MraStatus::InvalidArgument, e.to_string());
        }
        match generate_network(&cfg) {
            Ok(net) => {
                *out = Box::into_raw(Box::new(MraNetwork(net)));
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::GenerationFailed, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn mra_network_from_json(json: *const c_char, out: *mut *mut MraNetwork) -> MraStatus {
    guard(|| {
        nonnull!(out);
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Network::from_json(text) {
            Ok(net) => {
                *out = Box::into_raw(Box::new(MraNetwork(net)));
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::ParseError, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn mra_network_to_json(net: *const MraNetwork, out: *mut *mut c_char) -> MraStatus {
    guard(|| {
        nonnull!(net, out);
        write_string(out, (*net).0.to_json())
    })
}

/// Number of nodes, or 0 for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn mra_network_node_count(net: *const MraNetwork) -> usize {
    if net.is_null() {
        0
    } else {
        (*net).0.node_count()
    }
}

#[no_mangle]
pub unsafe extern "C" fn mra_network_are_neighbors(
    net: *const MraNetwork,
    u: usize,
    v: usize,
    out: *mut bool,
) -> MraStatus {
    guard(|| {
        nonnull!(net, out);
        match (*net).0.are_neighbors(u, v) {
            Ok(b) => {
                *out = b;
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::InvalidArgument, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn mra_network_free(net: *mut MraNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Routes `i -> j`. `method` is one of `SPA`, `K_DISJOINT`, `MPR_SPA`,
/// `MPR_K_DISJOINT`; `k = 0` picks the method's default path budget.
#[no_mangle]
pub unsafe extern "C" fn mra_route(
    net: *const MraNetwork,
    i: usize,
    j: usize,
    method: *const c_char,
    k: usize,
    out: *mut *mut MraPathSet,
) -> MraStatus {
    guard(|| {
        nonnull!(net, out);
        let net = &(*net).0;
        let method: RoutingMethod = match str_arg(method).map(str::parse) {
            Ok(Ok(m)) => m,
            Ok(Err(e)) => return fail(MraStatus::InvalidArgument, format!("{e}")),
            Err(s) => return s,
        };
        if let Err(e) = net.are_neighbors(i, j) {
            return fail(MraStatus::InvalidArgument, e.to_string());
        }
        if i == j {
            return fail(MraStatus::InvalidArgument, "origin equals destination");
        }
        let config = if k == 0 {
            RoutingConfig::with_default_k(method, net.params().delta)
        } else {
            match RoutingConfig::new(method, k) {
                Ok(c) => c,
                Err(e) => return fail(MraStatus::InvalidArgument, e.to_string()),
            }
        };
        let ps = config.route(net, i, j);
        *out = Box::into_raw(Box::new(MraPathSet::new(ps, config)));
        MraStatus::Ok
    })
}

/// Number of paths, or 0 for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn mra_path_set_len(ps: *const MraPathSet) -> usize {
    if ps.is_null() {
        0
    } else {
        (*ps).paths.len()
    }
}

/// Borrows the node sequence of path `index`; valid while `ps` lives.
#[no_mangle]
pub unsafe extern "C" fn mra_path_set_path(
    ps: *const MraPathSet,
    index: usize,
    nodes: *mut *const usize,
    len: *mut usize,
) -> MraStatus {
    guard(|| {
        nonnull!(ps, nodes, len);
        let all = &(*ps).nodes;
        match all.get(index) {
            Some(p) => {
                *nodes = p.as_ptr();
                *len = p.len();
                MraStatus::Ok
            }
            None => fail(MraStatus::InvalidArgument, format!("path index {index} out of range")),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn mra_path_set_to_json(ps: *const MraPathSet, out: *mut *mut c_char) -> MraStatus {
    guard(|| {
        nonnull!(ps, out);
        let doc = PathSetDocument::new(&(*ps).paths, (*ps).config);
        match serde_json::to_string(&doc) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(MraStatus::ParseError, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn mra_path_set_from_json(json: *const c_char, out: *mut *mut MraPathSet) -> MraStatus {
    guard(|| {
        nonnull!(out);
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let doc: PathSetDocument = match serde_json::from_str(text) {
            Ok(d) => d,
            Err(e) => return fail(MraStatus::ParseError, e.to_string()),
        };
        match (doc.to_path_set(), doc.config()) {
            (Ok(ps), Ok(cfg)) => {
                *out = Box::into_raw(Box::new(MraPathSet::new(ps, cfg)));
                MraStatus::Ok
            }
            (Err(e), _) | (_, Err(e)) => fail(MraStatus::ParseError, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn mra_path_set_free(ps: *mut MraPathSet) {
    if !ps.is_null() {
        drop(Box::from_raw(ps));
    }
}

/// Refines a path set in `net`; the result is a new handle.
#[no_mangle]
pub unsafe extern "C" fn mra_refine(
    net: *const MraNetwork,
    ps: *const MraPathSet,
    out: *mut *mut MraPathSet,
) -> MraStatus {
    guard(|| {
        nonnull!(net, ps, out);
        let net = &(*net).0;
        let ps = &*ps;
        if let Err(e) = ps.paths.validate_in(net) {
            return fail(MraStatus::RoutingError, e.to_string());
        }
        let source = ConfiguredRoutes {
            net,
            config: ps.config,
        };
        match refine(net, &ps.paths, &source) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(MraPathSet::new(r.refined, ps.config)));
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::RefineError, e.to_string()),
        }
    })
}

/// Exact maximum-weight independent set. Weights are `numer[v] / denom[v]`;
/// `edges` holds `edge_count` pairs as `2 * edge_count` vertex indices.
/// `out_vertices` must have room for `order` entries; the selection is
/// written in ascending order and its size to `out_count`.
#[no_mangle]
pub unsafe extern "C" fn mra_mwis_solve(
    order: usize,
    numer: *const u64,
    denom: *const u64,
    edges: *const usize,
    edge_count: usize,
    out_vertices: *mut usize,
    out_count: *mut usize,
    out_weight: *mut f64,
) -> MraStatus {
    guard(|| {
        nonnull!(out_count, out_weight);
        if order > 0 {
            nonnull!(numer, denom, out_vertices);
        }
        if edge_count > 0 {
            nonnull!(edges);
        }
        let numer = slice(numer, order);
        let denom = slice(denom, order);
        if denom.contains(&0) {
            return fail(MraStatus::InvalidArgument, "zero weight denominator");
        }
        let weights: Vec<Weight> = numer.iter().zip(denom).map(|(&a, &b)| Ratio::new(a, b)).collect();
        let edge_list: Vec<(usize, usize)> = slice(edges, 2 * edge_count)
            .chunks_exact(2)
            .map(|c| (c[0], c[1]))
            .collect();
        let result = WeightedGraph::with_edges(weights, edge_list).and_then(|g| mwis::solve(&g));
        match result {
            Ok(sel) => {
                for (x, &v) in sel.vertices.iter().enumerate() {
                    *out_vertices.add(x) = v;
                }
                *out_count = sel.vertices.len();
                *out_weight = *sel.weight.numer() as f64 / *sel.weight.denom() as f64;
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::SolverError, e.to_string()),
        }
    })
}

/// Jain fairness index of `len` nonnegative counts.
#[no_mangle]
pub unsafe extern "C" fn mra_jain_index(counts: *const u64, len: usize, out: *mut f64) -> MraStatus {
    guard(|| {
        nonnull!(out);
        if len > 0 {
            nonnull!(counts);
        }
        match metrics::fairness_paths(slice(counts, len)) {
            Ok(f) => {
                *out = metrics::to_f64(&f);
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::MetricsError, e.to_string()),
        }
    })
}

/// Simulates the union of `count` path sets and reports delivered packets
/// per measured slot. Other simulation settings take their defaults.
#[no_mangle]
pub unsafe extern "C" fn mra_simulate(
    net: *const MraNetwork,
    sets: *const *const MraPathSet,
    count: usize,
    total_slots: u64,
    warmup_slots: u64,
    out_packets_per_slot: *mut f64,
) -> MraStatus {
    guard(|| {
        nonnull!(net, out_packets_per_slot);
        if count > 0 {
            nonnull!(sets);
        }
        let handles = slice(sets, count);
        if handles.iter().any(|h| h.is_null()) {
            return fail(MraStatus::NullPointer, "null path-set handle");
        }
        let active: Vec<PathSet> = handles.iter().map(|&h| (*h).paths.clone()).collect();
        let cfg = SimConfig {
            total_slots,
            warmup_slots,
            ..SimConfig::default()
        };
        let stats = match simulate_tdma(&(*net).0, &active, &cfg) {
            Ok(s) => s,
            Err(e) => return fail(MraStatus::SimulationError, e.to_string()),
        };
        match metrics::throughput(&stats) {
            Ok(t) => {
                *out_packets_per_slot = metrics::to_f64(&t);
                MraStatus::Ok
            }
            Err(e) => fail(MraStatus::MetricsError, e.to_string()),
        }
    })
}
