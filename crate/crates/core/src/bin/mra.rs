use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mra_core::experiment::{self, Manifest, RefinementMode, SweepConfig, Theta};
use mra_core::metrics::{self, ThroughputReport};
use mra_core::refine::{refine, ConfiguredRoutes, Decision};
use mra_core::routing::{PathSetDocument, RoutingConfig, RoutingMethod};
use mra_core::scheduler::{simulate_tdma_observed, SimConfig, TraceWriter, TrafficStats, SCHEDULER_NAME};
use mra_core::topology::{
    comm_radius, generate_network, GenerationConfig, Network, NetworkDocument, NetworkParams, Point,
    DEFAULT_SIDE, NETWORK_FORMAT_VERSION,
};
use mra_core::{fig1, mwis, Error, PathSet};

const EXIT_CONFIG: u8 = 1;
const EXIT_PARTIAL: u8 = 2;

/// Multi-path route refinement toolkit for wireless mesh networks.
#[derive(Parser)]
#[command(name = "mra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random mesh and write it as JSON.
    GenNet {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SIDE)]
        side: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Discover the initial path set for one origin-destination pair.
    Route {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        routing: RoutingArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Refine a stored path set.
    Refine {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        paths: PathBuf,
        /// Write the conflict-graph listing to this file (`-` for stderr).
        #[arg(long)]
        dump_graph: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate a union of stored path sets under the TDMA scheduler.
    Simulate {
        #[arg(long)]
        net: PathBuf,
        #[arg(long = "paths", required = true, num_args = 1..)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        sim: SimArgs,
        /// Write per-slot fired link indices to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an original-versus-refined sweep and write CSV plus a manifest.
    Sweep(SweepArgs),
    /// Check stored artifacts against their invariants.
    Audit {
        #[arg(long)]
        net: PathBuf,
        /// Path-set documents that must be valid in the network.
        #[arg(long = "paths", num_args = 0..)]
        paths: Vec<PathBuf>,
    },
    /// Run the five-path reference instance and print graph and selection.
    Fig1,
}

#[derive(Args)]
struct RoutingArgs {
    #[arg(long, default_value = "K_DISJOINT")]
    method: RoutingMethod,
    /// Path budget; defaults depend on the method and the network's delta.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = SimConfig::default().total_slots)]
    total_slots: u64,
    #[arg(long, default_value_t = SimConfig::default().warmup_slots)]
    warmup_slots: u64,
    #[arg(long, default_value_t = SimConfig::default().injection)]
    injection: u32,
    #[arg(long, default_value_t = SimConfig::default().queue_cap)]
    queue_cap: usize,
    #[arg(long, default_value_t = SimConfig::default().slot_seconds)]
    slot_seconds: f64,
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            total_slots: self.total_slots,
            warmup_slots: self.warmup_slots,
            injection: self.injection,
            queue_cap: self.queue_cap,
            slot_seconds: self.slot_seconds,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: usize,
    #[arg(long, default_value_t = DEFAULT_SIDE)]
    side: f64,
    #[arg(long, default_value_t = 1)]
    networks: usize,
    #[arg(long, default_value_t = 100)]
    od_sets: usize,
    /// Pair densities, as decimals or fractions.
    #[arg(long = "theta", num_args = 1.., value_delimiter = ',', default_value = "1")]
    theta: Vec<Theta>,
    #[arg(long = "method", num_args = 1.., value_delimiter = ',', default_value = "K_DISJOINT,MPR_K_DISJOINT")]
    methods: Vec<RoutingMethod>,
    /// Path budget for every method; defaults depend on method and delta.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "both")]
    refinement: RefinementMode,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "runs.csv")]
    csv: PathBuf,
    #[arg(long, default_value = "manifest.json")]
    manifest: PathBuf,
    /// Add the zero-traffic OD-pair histogram to the manifest.
    #[arg(long)]
    zero_histogram: bool,
    /// Regenerate only the rows of this seed lineage and print them as JSON.
    #[arg(long)]
    replay: Option<String>,
}

impl SweepArgs {
    fn config(&self) -> Result<SweepConfig, Error> {
        let methods = self
            .methods
            .iter()
            .map(|&m| match self.k {
                Some(k) => RoutingConfig::new(m, k),
                None => Ok(RoutingConfig::with_default_k(m, self.delta)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SweepConfig {
            n: self.n,
            delta: self.delta,
            side: self.side,
            networks: self.networks,
            od_sets_per_network: self.od_sets,
            theta_points: self.theta.clone(),
            methods,
            refinement: self.refinement,
            sim: self.sim.config(),
            seed: self.seed,
        })
    }
}

fn open_output(path: Option<&FsPath>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(path: Option<&FsPath>, value: &T) -> Result<(), Error> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn load_network(path: &FsPath) -> Result<Network, Error> {
    Ok(Network::from_json(&std::fs::read_to_string(path)?)?)
}

fn load_paths(path: &FsPath) -> Result<(PathSet, PathSetDocument), Error> {
    let doc: PathSetDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    Ok((doc.to_path_set()?, doc))
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    scheduler: &'static str,
    config: SimConfig,
    throughput: ThroughputReport,
    fairness_paths: Option<f64>,
    fairness_od: Option<f64>,
    zero_traffic_pairs: usize,
    stats: &'a TrafficStats,
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::GenNet {
            n,
            delta,
            seed,
            side,
            output,
        } => {
            let net = generate_network(&GenerationConfig::new(n, delta, seed).with_side(side))?;
            write_json(output.as_deref(), &net.to_document())?;
        }
        Command::Route {
            net,
            from,
            to,
            routing,
            output,
        } => {
            let net = load_network(&net)?;
            net.are_neighbors(from, to)?;
            let cfg = match routing.k {
                Some(k) => RoutingConfig::new(routing.method, k)?,
                None => RoutingConfig::with_default_k(routing.method, net.params().delta),
            };
            let ps = cfg.route(&net, from, to);
            write_json(output.as_deref(), &PathSetDocument::new(&ps, cfg))?;
        }
        Command::Refine {
            net,
            paths,
            dump_graph,
            output,
        } => {
            let net = load_network(&net)?;
            let (ps, doc) = load_paths(&paths)?;
            ps.validate_in(&net)?;
            let source = ConfiguredRoutes {
                net: &net,
                config: doc.config()?,
            };
            let r = refine(&net, &ps, &source)?;
            if let Some(target) = dump_graph {
                let text = match &r.decision {
                    Decision::Selected { graph, .. } => graph.dump(|p| format!("p{p}")),
                    Decision::DirectLink => "direct link; no conflict graph\n".to_string(),
                    Decision::Moot => "single path; no conflict graph\n".to_string(),
                };
                if target.as_os_str() == "-" {
                    eprint!("{text}");
                } else {
                    std::fs::write(target, text)?;
                }
            }
            write_json(output.as_deref(), &PathSetDocument::new(&r.refined, doc.config()?))?;
        }
        Command::Simulate {
            net,
            paths,
            sim,
            trace,
            output,
        } => {
            let net = load_network(&net)?;
            let active = paths
                .iter()
                .map(|p| load_paths(p).map(|(ps, _)| ps))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = sim.config();
            let stats = match trace {
                Some(path) => {
                    let mut tw = TraceWriter::new(BufWriter::new(File::create(path)?));
                    let stats = simulate_tdma_observed(&net, &active, &cfg, &mut tw)?;
                    if let Some(e) = tw.error {
                        return Err(e.into());
                    }
                    tw.out.flush()?;
                    stats
                }
                None => simulate_tdma_observed(&net, &active, &cfg, &mut ())?,
            };
            let per_slot = metrics::throughput(&stats)?;
            let report = SimulationReport {
                scheduler: SCHEDULER_NAME,
                config: cfg,
                throughput: ThroughputReport::new(&per_slot, cfg.slot_seconds, None, 1.0),
                fairness_paths: metrics::fairness_paths(&stats.per_path).ok().map(|f| metrics::to_f64(&f)),
                fairness_od: metrics::fairness_od(&stats.od_counts()).ok().map(|f| metrics::to_f64(&f)),
                zero_traffic_pairs: metrics::zero_traffic_pairs(&stats),
                stats: &stats,
            };
            write_json(output.as_deref(), &report)?;
        }
        Command::Sweep(args) => {
            let cfg = args.config()?;
            if let Some(lineage) = &args.replay {
                let rows = experiment::replay(&cfg, &lineage.parse()?)?;
                write_json(None, &rows)?;
                return Ok(ExitCode::SUCCESS);
            }
            let outcome = experiment::run_sweep(&cfg)?;
            let file = BufWriter::new(File::create(&args.csv)?);
            experiment::write_csv(file, &outcome.records).map_err(io::Error::other)?;
            let manifest = Manifest::new(&cfg, &outcome, args.zero_histogram);
            write_json(Some(&args.manifest), &manifest)?;
            eprintln!(
                "{} rows written to {}; manifest at {}",
                outcome.records.len(),
                args.csv.display(),
                args.manifest.display()
            );
            if !outcome.failures.is_empty() {
                eprintln!("{} instance(s) failed; see manifest", outcome.failures.len());
                return Ok(ExitCode::from(EXIT_PARTIAL));
            }
        }
        Command::Audit { net, paths } => return audit(&net, &paths),
        Command::Fig1 => fig1_report()?,
    }
    Ok(ExitCode::SUCCESS)
}

/// Loads the network without the constructor's own checks so every problem
/// can be listed.
fn audit(net_path: &FsPath, paths: &[PathBuf]) -> Result<ExitCode, Error> {
    let doc: NetworkDocument = serde_json::from_str(&std::fs::read_to_string(net_path)?)?;
    let mut problems = Vec::new();
    if doc.version != NETWORK_FORMAT_VERSION {
        problems.push(format!("unsupported format version {}", doc.version));
    }
    match comm_radius(doc.n, doc.delta) {
        Ok(r) if r == doc.radius => {}
        Ok(r) => problems.push(format!("radius {} differs from expected {r}", doc.radius)),
        Err(e) => problems.push(e.to_string()),
    }
    let net = Network::from_parts(
        NetworkParams {
            n: doc.n,
            delta: doc.delta,
            side: doc.side,
            seed: doc.seed,
        },
        doc.radius,
        doc.positions.iter().map(|&[x, y]| Point::new(x, y)).collect(),
    );
    problems.extend(net.audit().iter().map(|v| format!("{v:?}")));
    for p in paths {
        match load_paths(p) {
            Ok((ps, _)) => {
                if let Err(e) = ps.validate_in(&net) {
                    problems.push(format!("{}: {e}", p.display()));
                }
            }
            Err(e) => problems.push(format!("{}: {e}", p.display())),
        }
    }
    if problems.is_empty() {
        println!("ok");
        Ok(ExitCode::SUCCESS)
    } else {
        for p in &problems {
            println!("violation: {p}");
        }
        Ok(ExitCode::from(EXIT_PARTIAL))
    }
}

fn fig1_report() -> Result<(), Error> {
    let (net, ps) = fig1::instance();
    let nexts = mra_core::routing::next_sets(&ps);
    let pc = mra_core::refine::classify_pairs(&net, &ps, &nexts);
    let graph = mra_core::refine::build_conflict_graph(&pc, &ps)?;
    let selection = mwis::solve(&graph.to_weighted_graph())?;
    let mut out = io::stdout().lock();
    for (id, p) in ps.paths().iter().enumerate() {
        writeln!(out, "path {} {p}", fig1::label(id))?;
    }
    out.write_all(graph.dump(fig1::label).as_bytes())?;
    let names: Vec<String> = selection.vertices.iter().map(|&v| fig1::label(v)).collect();
    writeln!(out, "selection {} weight {}", names.join(" "), selection.weight)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
