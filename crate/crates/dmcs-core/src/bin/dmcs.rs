//! Command-line front end: search, gen, eval, stats. All structured output
//! is JSON on stdout; failures print a machine-readable error object on
//! stderr and exit with 2 (bad input), 3 (no feasible community), or
//! 4 (exact-search size refusal).

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dmcs_core::baselines::{exact_dmcs, highest_core_search, kcore_search};
use dmcs_core::error::{Error, Result};
use dmcs_core::generate::{
    planted_partition, read_ground_truth, ring_of_cliques, write_edge_list, write_ground_truth,
};
use dmcs_core::graph::{Graph, NodeId, NodeSet};
use dmcs_core::metrics::best_against_overlapping;
use dmcs_core::records::{
    ErrorBody, ErrorRecord, EvalRecord, RunRecord, StatsRecord, SCHEMA_VERSION,
};
use dmcs_core::search::{fpa, nca, SearchResult};

const DEFAULT_NODE_LIMIT: usize = 16;
const NODE_LIMIT_ENV: &str = "DMCS_NODE_LIMIT";

#[derive(Parser)]
#[command(
    name = "dmcs",
    version,
    about = "Community search by density modularity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a community containing the query nodes
    Search(SearchArgs),
    /// Generate a synthetic graph plus ground-truth communities
    #[command(subcommand)]
    Gen(GenCommand),
    /// Score a search result against ground-truth communities
    Eval(EvalArgs),
    /// Summary statistics of a graph file
    Stats(StatsArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// Edge-list file (`u v [weight]` per line, '#' comments)
    graph: PathBuf,
    /// Query node ids, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    query: Vec<u64>,
    /// Search algorithm
    #[arg(long, value_enum)]
    algo: AlgoChoice,
    /// Minimum degree for kcore
    #[arg(long)]
    k: Option<u32>,
    /// Disable layer pruning (fpa only)
    #[arg(long)]
    no_pruning: bool,
    /// Parse the third column as edge weights
    #[arg(long)]
    weighted: bool,
    /// Component-size cap for exact search (overrides DMCS_NODE_LIMIT)
    #[arg(long)]
    node_limit: Option<usize>,
    /// Also write the JSON record to this path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoChoice {
    Fpa,
    Nca,
    Kcore,
    Highcore,
    Exact,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Ring of m cliques of size s
    Ring {
        num_cliques: u32,
        clique_size: u32,
        /// Output prefix: writes `<prefix>.el` and `<prefix>.cmty`
        #[arg(long)]
        out: PathBuf,
    },
    /// Planted partition (stochastic block model with uniform blocks)
    Sbm {
        nodes: u32,
        communities: u32,
        p_in: f64,
        p_out: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output prefix: writes `<prefix>.el` and `<prefix>.cmty`
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct EvalArgs {
    /// RunRecord JSON produced by `dmcs search`
    result: PathBuf,
    /// Ground-truth file: one community of space-separated ids per line
    truth: PathBuf,
    /// Graph file for the id universe (defaults to the path in the record)
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Node count; skips graph loading and treats ids as already dense
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct StatsArgs {
    /// Edge-list file
    graph: PathBuf,
    /// Parse the third column as edge weights
    #[arg(long)]
    weighted: bool,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Search(args) => cmd_search(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Stats(args) => cmd_stats(args),
    };
    if let Err(err) = outcome {
        let record = ErrorRecord {
            error: ErrorBody {
                kind: err.kind().to_string(),
                message: err.to_string(),
            },
        };
        eprintln!("{}", serde_json::to_string_pretty(&record).unwrap());
        std::process::exit(exit_code(&err));
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoKCoreCommunity { .. } | Error::QueriesSplitAcrossCores { .. } => 3,
        Error::ComponentTooLarge { .. } => 4,
        _ => 2,
    }
}

fn load_graph(path: &Path, weighted: bool) -> Result<Graph> {
    let file = File::open(path)?;
    Graph::from_edge_list(BufReader::new(file), weighted)
}

fn resolve_queries(g: &Graph, external: &[u64]) -> Result<NodeSet> {
    let ids = external
        .iter()
        .map(|&ext| g.internal_id(ext).ok_or(Error::UnknownNode(ext)))
        .collect::<Result<Vec<NodeId>>>()?;
    Ok(NodeSet::from_vec(ids))
}

fn cmd_search(args: SearchArgs) -> Result<()> {
    let graph = load_graph(&args.graph, args.weighted)?;
    let query = resolve_queries(&graph, &args.query)?;
    let pruning = !args.no_pruning;
    let node_limit = match args.node_limit {
        Some(limit) => limit,
        None => match std::env::var(NODE_LIMIT_ENV) {
            Ok(text) => text
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("{NODE_LIMIT_ENV} must be an integer")))?,
            Err(_) => DEFAULT_NODE_LIMIT,
        },
    };

    let start = Instant::now();
    let result: SearchResult = match args.algo {
        AlgoChoice::Fpa => fpa(&graph, &query, pruning)?,
        AlgoChoice::Nca => nca(&graph, &query)?,
        AlgoChoice::Kcore => {
            let k = args
                .k
                .ok_or_else(|| Error::invalid("--k is required for the kcore algorithm"))?;
            kcore_search(&graph, &query, k)?
        }
        AlgoChoice::Highcore => highest_core_search(&graph, &query)?,
        AlgoChoice::Exact => exact_dmcs(&graph, &query, node_limit)?,
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut sorted_query = args.query.clone();
    sorted_query.sort_unstable();
    let record = RunRecord {
        schema: SCHEMA_VERSION,
        graph: args.graph.display().to_string(),
        algorithm: result.algorithm,
        query: sorted_query,
        k: args.k.filter(|_| args.algo == AlgoChoice::Kcore),
        pruning: (args.algo == AlgoChoice::Fpa).then_some(pruning),
        community: result
            .community
            .iter()
            .map(|v| graph.external_id(v))
            .collect(),
        size: result.community.len(),
        dm: result.dm,
        cm: result.cm,
        best_iteration: result.best_iteration,
        removals: result.removals,
        wall_time_ms,
    };
    let text = serde_json::to_string_pretty(&record).unwrap();
    if let Some(path) = &args.out {
        let mut file = BufWriter::new(File::create(path)?);
        writeln!(file, "{text}")?;
    }
    println!("{text}");
    Ok(())
}

fn cmd_gen(args: GenCommand) -> Result<()> {
    let (prefix, graph, truth) = match args {
        GenCommand::Ring {
            num_cliques,
            clique_size,
            out,
        } => {
            let (graph, truth) = ring_of_cliques(num_cliques, clique_size)?;
            (out, graph, truth)
        }
        GenCommand::Sbm {
            nodes,
            communities,
            p_in,
            p_out,
            seed,
            out,
        } => {
            let (graph, truth) = planted_partition(nodes, communities, p_in, p_out, seed)?;
            (out, graph, truth)
        }
    };
    let edge_path = prefix.with_extension("el");
    let truth_path = prefix.with_extension("cmty");
    let mut edge_file = BufWriter::new(File::create(&edge_path)?);
    write_edge_list(&mut edge_file, &graph)?;
    edge_file.flush()?;
    let mut truth_file = BufWriter::new(File::create(&truth_path)?);
    write_ground_truth(&mut truth_file, &truth, &graph)?;
    truth_file.flush()?;

    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "schema": SCHEMA_VERSION,
            "files": [edge_path.display().to_string(), truth_path.display().to_string()],
            "nodes": graph.node_count(),
            "edges": graph.edge_count(),
            "communities": truth.communities.len(),
        }))
        .unwrap()
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let record: RunRecord = serde_json::from_reader(BufReader::new(File::open(&args.result)?))
        .map_err(|e| Error::invalid(format!("cannot parse run record: {e}")))?;
    let truth_lines = read_ground_truth(BufReader::new(File::open(&args.truth)?))?;

    // Id universe: an explicit --n treats ids as dense already; otherwise
    // the graph (from --graph or the path recorded in the run) is loaded
    // for the external-to-internal mapping.
    let (n, to_internal): (usize, Box<dyn Fn(u64) -> Result<NodeId>>) = match args.n {
        Some(n) => (
            n,
            Box::new(move |ext: u64| {
                if (ext as usize) < n {
                    Ok(ext as NodeId)
                } else {
                    Err(Error::UnknownNode(ext))
                }
            }),
        ),
        None => {
            let path = args
                .graph
                .clone()
                .unwrap_or_else(|| PathBuf::from(&record.graph));
            let graph = load_graph(&path, false)?;
            let n = graph.node_count();
            (
                n,
                Box::new(move |ext: u64| graph.internal_id(ext).ok_or(Error::UnknownNode(ext))),
            )
        }
    };

    let map_set = |ids: &[u64]| -> Result<NodeSet> {
        Ok(NodeSet::from_vec(
            ids.iter()
                .map(|&ext| to_internal(ext))
                .collect::<Result<Vec<NodeId>>>()?,
        ))
    };
    let pred = map_set(&record.community)?;
    let query = map_set(&record.query)?;
    let truths = truth_lines
        .iter()
        .map(|line| map_set(line))
        .collect::<Result<Vec<NodeSet>>>()?;

    let report = best_against_overlapping(&pred, &truths, &query, n)?;
    let eval = EvalRecord {
        schema: SCHEMA_VERSION,
        nmi: report.nmi,
        ari: report.ari,
        fscore: report.fscore,
        matched_truth: report.matched_truth,
    };
    println!("{}", serde_json::to_string_pretty(&eval).unwrap());
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let graph = load_graph(&args.graph, args.weighted)?;
    let n = graph.node_count();

    let mut histogram_map = std::collections::BTreeMap::new();
    for v in 0..n as NodeId {
        *histogram_map.entry(graph.degree(v)).or_insert(0u64) += 1;
    }
    let record = StatsRecord {
        schema: SCHEMA_VERSION,
        nodes: n,
        edges: graph.edge_count(),
        components: graph.component_count(),
        degree_histogram: histogram_map.into_iter().collect(),
        diameter_estimate: diameter_lower_bound(&graph),
        warning: (n == 0).then(|| "graph file contains no edges or nodes".to_string()),
    };
    println!("{}", serde_json::to_string_pretty(&record).unwrap());
    Ok(())
}

/// Double-sweep BFS in the largest component: the eccentricity of the
/// farthest node found from an arbitrary start is a diameter lower bound.
fn diameter_lower_bound(g: &Graph) -> Option<u32> {
    let n = g.node_count();
    if n == 0 {
        return None;
    }
    // Lowest-id node of the largest component.
    let mut seen = vec![false; n];
    let mut best: Option<(usize, NodeId)> = None;
    for start in 0..n as NodeId {
        if seen[start as usize] {
            continue;
        }
        let component = g
            .connected_component_containing(&NodeSet::singleton(start))
            .expect("single query cannot be disconnected");
        for v in &component {
            seen[v as usize] = true;
        }
        if best.is_none_or(|(size, _)| component.len() > size) {
            best = Some((component.len(), start));
        }
    }
    let (_, start) = best.unwrap();
    let first = g.bfs_distances(&NodeSet::singleton(start));
    let far = first.layer(first.max_distance())[0];
    let second = g.bfs_distances(&NodeSet::singleton(far));
    Some(second.max_distance())
}
