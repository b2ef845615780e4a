//! `cdc`: command-line front end for the cover constructions and oracles.
//!
//! Exit codes: 0 success (including definitive negatives), 2 inconclusive
//! (budget ran out), 3 invalid input or a rejected certificate, 4 a
//! construction failed its own verification.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cdc_core::cdc::{reduce_to_hist_instance, tree_cycle_cdc};
use cdc_core::degeneracy::classify_degeneracy;
use cdc_core::flow::find_nz4f;
use cdc_core::graph::is_non_separating;
use cdc_core::io::{read_graph, read_graphs, to_edge_list, to_graph6, to_sparse6};
use cdc_core::oracle::{find_kcdc_containing, find_tree_cycle_decomposition, tree_cycle_decompositions, verify_cdc};
use cdc_core::record::{host_hash, CertificateRecord, FlowRecord, SequenceRecord};
use cdc_core::surgery::contract_edges;
use cdc_core::{generators, CdcCertificate, EdgeId, EdgeSet, Error, HistInstance, MultiGraph, SearchBudget, VertexId};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cdc", version, about = "Cycle double covers containing a prescribed cycle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Stop exhaustive searches after this many nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Stop exhaustive searches after this many seconds.
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Largest cycle-space dimension an enumeration accepts.
    #[arg(long, default_value_t = 24)]
    max_dimension: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget { max_nodes: self.budget_nodes, max_seconds: self.budget_seconds, max_dimension: self.max_dimension }
    }
}

#[derive(Args)]
struct CycleArgs {
    /// File with the edge ids of the prescribed cycle.
    #[arg(long)]
    cycle: Option<PathBuf>,
    /// Edge ids of the prescribed cycle, comma separated.
    #[arg(long, conflicts_with = "cycle")]
    cycle_ids: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a certificate against a graph.
    VerifyCdc { graph: PathBuf, certificate: PathBuf },
    /// Build a verified cover containing a prescribed cycle.
    FindCdc {
        graph: PathBuf,
        #[command(flatten)]
        cycle: CycleArgs,
        /// Search for a tree + cycle split instead of taking a cycle.
        #[arg(long)]
        auto_decompose: bool,
        /// Most cycle components accepted by the automatic split.
        #[arg(long, default_value_t = 3)]
        components: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contract small circuits through U and report where it ends.
    Classify {
        graph: PathBuf,
        /// Vertex ids of U, comma separated.
        #[arg(long)]
        u: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a nowhere-zero Z2 x Z2 flow.
    FindNz4f {
        graph: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for a cover with at most k members.
    OracleKcdc {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        cycle: CycleArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// For every graph in the batch files, look for a tree + cycle split
    /// whose cycle contraction has no nowhere-zero 4-flow.
    ScanSnarks {
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        components: usize,
        /// Add wall-clock timings (outputs are then no longer reproducible).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named or random instance.
    Gen {
        name: GenName,
        /// Size for `circuit` and `random-cubic`.
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
        /// Also write the named instance's prescribed cycle here.
        #[arg(long)]
        cycle_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenName {
    Petersen,
    QTriangles,
    K4PetersenMinusV,
    Theta,
    K4,
    Circuit,
    RandomCubic,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edges,
    Graph6,
    Sparse6,
}

/// A failed command: exit code plus a machine-readable record.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = if e.is_budget() || matches!(e, Error::DimensionTooLarge { .. }) {
            (2, "inconclusive")
        } else if contains_verification(&e) {
            (4, "verification")
        } else {
            (3, "invalid-input")
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn contains_verification(e: &Error) -> bool {
    match e {
        Error::Verification(_) => true,
        Error::Stage { source, .. } => contains_verification(source),
        _ => false,
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 3, kind: "invalid-input", message: message.into() }
}

type CmdResult = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<MultiGraph, Failure> {
    Ok(read_graph(&read_text(path)?)?)
}

fn parse_ids(text: &str) -> Result<Vec<u32>, Failure> {
    text.split(|c: char| c == ',' || c == '[' || c == ']' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| invalid(format!("not an id: {t:?}"))))
        .collect()
}

fn load_cycle(args: &CycleArgs) -> Result<Option<EdgeSet>, Failure> {
    let text = match (&args.cycle, &args.cycle_ids) {
        (Some(path), _) => read_text(path)?,
        (None, Some(ids)) => ids.clone(),
        (None, None) => return Ok(None),
    };
    Ok(Some(parse_ids(&text)?.into_iter().map(EdgeId).collect()))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", text.trim_end()) {
                // a closed pipe (e.g. `| head`) is not an error
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(invalid(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> CmdResult {
    emit(out, &(serde_json::to_string_pretty(v).expect("json") + "\n"))
}

fn verify_cdc_cmd(graph: &Path, certificate: &Path) -> CmdResult {
    let g = load_graph(graph)?;
    let rec: CertificateRecord =
        serde_json::from_str(&read_text(certificate)?).map_err(|e| invalid(format!("certificate: {e}")))?;
    let cert = rec.certificate_for(&g)?;
    match verify_cdc(&g, &cert) {
        Ok(()) => emit_json(None, &json!({"verdict": "ok", "members": cert.len(), "host_hash": rec.host_hash})),
        Err(v) => {
            emit_json(None, &json!({"verdict": "violation", "violation": v.to_string()}))?;
            Err(Failure { code: 3, kind: "violation", message: v.to_string() })
        }
    }
}

/// Whether `c` is the complement of a spanning tree.
fn tree_complement(g: &MultiGraph, c: &EdgeSet) -> Option<HistInstance> {
    let tree = g.edge_set().difference(c);
    if !g.is_spanning_tree(&tree) {
        return None;
    }
    HistInstance::new(g.clone(), tree, c.clone()).ok()
}

fn cover_for_cycle(g: &MultiGraph, c: &EdgeSet) -> Result<CdcCertificate, Failure> {
    if let Some(inst) = tree_complement(g, c) {
        return Ok(tree_cycle_cdc(&inst)?);
    }
    if !is_non_separating(g, c)? {
        return Err(invalid("the cycle separates the graph"));
    }
    let r = reduce_to_hist_instance(g, c)?;
    if r.instance.components.len() > 3 {
        return Err(invalid(format!(
            "the tree reduction has {} cycle components; at most 3 are supported",
            r.instance.components.len()
        )));
    }
    Ok(r.pull_back(&tree_cycle_cdc(&r.instance)?)?)
}

fn find_cdc_cmd(
    graph: &Path,
    cycle: &CycleArgs,
    auto: bool,
    components: usize,
    budget: SearchBudget,
    out: Option<&Path>,
) -> CmdResult {
    let g = load_graph(graph)?;
    let (c, cert) = match (load_cycle(cycle)?, auto) {
        (Some(c), false) => {
            let cert = cover_for_cycle(&g, &c)?;
            (c, cert)
        }
        (None, true) => {
            let inst = find_tree_cycle_decomposition(&g, components, &budget)?
                .ok_or_else(|| invalid(format!("no spanning tree + cycle split with at most {components} components")))?;
            let cert = tree_cycle_cdc(&inst)?;
            (inst.cycle, cert)
        }
        _ => return Err(invalid("give exactly one of --cycle, --cycle-ids or --auto-decompose")),
    };
    // re-check before anything is written
    verify_cdc(&g, &cert).map_err(|v| Failure { code: 4, kind: "verification", message: v.to_string() })?;
    if cert.prescribed_cycle() != c {
        return Err(Failure { code: 4, kind: "verification", message: "prescribed member differs from the cycle".into() });
    }
    let rec = CertificateRecord::new(&g, &cert);
    emit_json(out, &serde_json::to_value(rec).expect("json"))
}

fn classify_cmd(graph: &Path, u: &str, out: Option<&Path>) -> CmdResult {
    let g = load_graph(graph)?;
    let u: BTreeSet<VertexId> = parse_ids(u)?.into_iter().map(VertexId).collect();
    let v = classify_degeneracy(&g, &u)?;
    let rec = SequenceRecord::new(&v.sequence, Some(v.kind));
    let final_u: Vec<u32> = v.final_u.iter().map(|x| x.0).collect();
    emit_json(out, &json!({"endpoint": v.kind, "final_u": final_u, "sequence": rec}))
}

fn find_nz4f_cmd(graph: &Path, budget: SearchBudget, out: Option<&Path>) -> CmdResult {
    let g = load_graph(graph)?;
    match find_nz4f(&g, &budget)? {
        Some(f) => emit_json(out, &json!({"verdict": "found", "flow": FlowRecord::new(&g, &f)})),
        None => emit_json(out, &json!({"verdict": "none", "host_hash": host_hash(&g)})),
    }
}

fn oracle_kcdc_cmd(graph: &Path, k: usize, cycle: &CycleArgs, budget: SearchBudget, out: Option<&Path>) -> CmdResult {
    let g = load_graph(graph)?;
    let c = load_cycle(cycle)?.unwrap_or_default();
    match find_kcdc_containing(&g, &c, k, &budget)? {
        Some(cert) => emit_json(out, &json!({"verdict": "found", "certificate": CertificateRecord::new(&g, &cert)})),
        None => emit_json(out, &json!({"verdict": "none", "k": k, "host_hash": host_hash(&g)})),
    }
}

/// One scan record; never fails, errors become verdicts.
fn scan_graph(g: &MultiGraph, components: usize, budget: &SearchBudget) -> Value {
    let run = || -> Result<Value, Error> {
        let splits = tree_cycle_decompositions(g, components, budget)?;
        if splits.is_empty() {
            return Ok(json!({"verdict": "no-decomposition", "decompositions": 0}));
        }
        for inst in &splits {
            let contracted = contract_edges(g, &inst.cycle)?;
            if find_nz4f(&contracted.graph, budget)?.is_none() {
                let cycle: Vec<u32> = inst.cycle.iter().map(|e| e.0).collect();
                return Ok(json!({"verdict": "hit", "decompositions": splits.len(), "cycle": cycle,
                    "components": inst.components.len()}));
            }
        }
        Ok(json!({"verdict": "all-contractions-have-flows", "decompositions": splits.len()}))
    };
    run().unwrap_or_else(|e| {
        let verdict = if e.is_budget() || matches!(e, Error::DimensionTooLarge { .. }) { "inconclusive" } else { "error" };
        json!({"verdict": verdict, "message": e.to_string()})
    })
}

fn scan_cmd(files: &[PathBuf], components: usize, timing: bool, budget: SearchBudget, out: Option<&Path>) -> CmdResult {
    let per_file: Vec<Result<Vec<String>, Failure>> = files
        .par_iter()
        .map(|path| {
            let graphs = read_graphs(&read_text(path)?)?;
            Ok(graphs
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let start = Instant::now();
                    let mut rec = scan_graph(g, components, &budget);
                    rec["file"] = json!(path.display().to_string());
                    rec["index"] = json!(i);
                    rec["instance_hash"] = json!(host_hash(g));
                    if timing {
                        rec["millis"] = json!(start.elapsed().as_secs_f64() * 1e3);
                    }
                    serde_json::to_string(&rec).expect("json")
                })
                .collect())
        })
        .collect();
    let mut text = String::new();
    for lines in per_file {
        for line in lines? {
            text.push_str(&line);
            text.push('\n');
        }
    }
    emit(out, &text)
}

fn gen_cmd(
    name: GenName,
    n: u32,
    seed: u64,
    format: GraphFormat,
    cycle_out: Option<&Path>,
    out: Option<&Path>,
) -> CmdResult {
    let mut cycle = None;
    let g = match name {
        GenName::Petersen => generators::petersen(),
        GenName::QTriangles => {
            let (q, inst) = generators::q_triangles();
            // renumber so the nauty formats apply; edge ids are unchanged
            let q = renumber(&q);
            cycle = Some(inst.cycle);
            q
        }
        GenName::K4PetersenMinusV => generators::k4_of_petersen_minus_v(),
        GenName::Theta => generators::theta(),
        GenName::K4 => generators::k4(),
        GenName::Circuit => {
            if n == 0 {
                return Err(invalid("--n must be positive"));
            }
            generators::circuit(n)
        }
        GenName::RandomCubic => {
            if n < 4 || n % 2 == 1 {
                return Err(invalid("random cubic graphs need an even --n of at least 4"));
            }
            generators::random_bridgeless_cubic(n, &mut ChaCha8Rng::seed_from_u64(seed))
        }
    };
    let text = match format {
        GraphFormat::Edges => to_edge_list(&g),
        GraphFormat::Graph6 => to_graph6(&g)? + "\n",
        GraphFormat::Sparse6 => to_sparse6(&g)? + "\n",
    };
    emit(out, &text)?;
    match (cycle_out, cycle) {
        (Some(path), Some(c)) => {
            let ids: Vec<String> = c.iter().map(|e| e.0.to_string()).collect();
            emit(Some(path), &(ids.join(" ") + "\n"))
        }
        (Some(_), None) => Err(invalid("this instance has no prescribed cycle")),
        _ => Ok(()),
    }
}

/// The same edges on vertices `0..n`, keeping edge ids.
fn renumber(g: &MultiGraph) -> MultiGraph {
    let order: Vec<VertexId> = g.vertices().collect();
    let index = |v: VertexId| order.binary_search(&v).unwrap() as u32;
    let pairs: Vec<(u32, u32)> = g.edges().map(|(_, u, v)| (index(u), index(v))).collect();
    debug_assert!(g.edges().enumerate().all(|(i, (e, _, _))| e.0 as usize == i));
    MultiGraph::from_edges(order.len() as u32, &pairs)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::VerifyCdc { graph, certificate } => verify_cdc_cmd(&graph, &certificate),
        Command::FindCdc { graph, cycle, auto_decompose, components, budget, out } => {
            find_cdc_cmd(&graph, &cycle, auto_decompose, components, budget.budget(), out.as_deref())
        }
        Command::Classify { graph, u, out } => classify_cmd(&graph, &u, out.as_deref()),
        Command::FindNz4f { graph, budget, out } => find_nz4f_cmd(&graph, budget.budget(), out.as_deref()),
        Command::OracleKcdc { graph, k, cycle, budget, out } => {
            oracle_kcdc_cmd(&graph, k, &cycle, budget.budget(), out.as_deref())
        }
        Command::ScanSnarks { files, components, timing, budget, out } => {
            scan_cmd(&files, components, timing, budget.budget(), out.as_deref())
        }
        Command::Gen { name, n, seed, format, cycle_out, out } => {
            gen_cmd(name, n, seed, format, cycle_out.as_deref(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let rec = json!({"error": f.kind, "message": f.message, "exit_code": f.code});
            eprintln!("{rec}");
            ExitCode::from(f.code)
        }
    }
}
