//! `pursuit` — generate pursuit-game graphs, decompose them into patrol
//! sectors, and evaluate cop strategies exactly or by simulation.
//!
//! Exit codes: 0 on success, 1 when a result row fails its strategy's
//! bound, 2 on usage or runtime errors.

mod bench;
mod experiment;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pursuit_core::graph::{generate, Graph, GraphKind};
use pursuit_core::sector::decompose;
use serde::Deserialize;

use bench::{run_suite, summary_lines, Suite};
use experiment::{run_instance, GamblerSpec, Instance, StrategyName, CSV_HEADER};

#[derive(Parser)]
#[command(
    name = "pursuit",
    version,
    about = "Pursuit-game harness: graphs, sector decompositions, and cop-strategy evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a connected graph as edge-list text (line 1: vertex
    /// count; then one "u v" line per edge).
    Generate {
        /// Graph family: path | cycle | star | grid | random_tree | connected_gnp.
        #[arg(long)]
        kind: GraphKind,
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Extra-edge probability (connected_gnp only).
        #[arg(long)]
        p: Option<f64>,
        /// Seed for the randomized families.
        #[arg(long, env = "PURSUIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a graph into at most k connected sectors (JSON output).
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        /// Number of cops, i.e. the sector budget.
        #[arg(short, long)]
        k: usize,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one (graph, cops, strategy, gambler) instance and print a
    /// result row.
    Eval {
        #[command(flatten)]
        graph: GraphArgs,
        /// Number of cops.
        #[arg(short, long)]
        k: usize,
        /// Cop strategy.
        #[arg(long, value_enum)]
        strategy: StrategyName,
        /// Gambler: uniform | point_eccentric | geometric_depth |
        /// leaf_mass | random_0 | random_1 | random:SEED | changing:P |
        /// @FILE.json.
        #[arg(long)]
        gambler: String,
        /// Hide the gambler's distributions from the cops; only
        /// dfs_patrol can build a schedule without them.
        #[arg(long)]
        unknown: bool,
        /// Monte Carlo trials; 0 skips simulation.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Seed for simulation and for seeded gambler specs.
        #[arg(long, env = "PURSUIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Row format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite: CSV rows to stdout (or --out), summary to
    /// stderr.
    Bench {
        /// Suite: known | unknown | changing | diameter | all.
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Monte Carlo trials per row; the default 0 evaluates exactly
        /// only.
        #[arg(long)]
        trials: Option<u64>,
        /// Master seed; corpus graphs, gamblers, and simulations all
        /// derive from it.
        #[arg(long, env = "PURSUIT_SEED")]
        seed: Option<u64>,
        /// Omit the timestamp header so reruns are byte-identical.
        #[arg(long)]
        reproducible: bool,
        /// JSON settings file {"suite", "trials", "seed", "reproducible"};
        /// explicit flags win over file entries.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Write the CSV to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Graph source shared by decompose and eval: an edge-list file, or a
/// generated family.
#[derive(Args)]
struct GraphArgs {
    /// Read the graph from an edge-list file.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["kind", "n", "p", "graph_seed"])]
    graph: Option<PathBuf>,
    /// Graph family to generate: path | cycle | star | grid | random_tree
    /// | connected_gnp.
    #[arg(long, requires = "n")]
    kind: Option<GraphKind>,
    /// Vertex count for a generated graph.
    #[arg(long)]
    n: Option<usize>,
    /// Extra-edge probability (connected_gnp only).
    #[arg(long)]
    p: Option<f64>,
    /// Seed for randomized graph families.
    #[arg(long, default_value_t = 0)]
    graph_seed: u64,
}

impl GraphArgs {
    /// Returns the graph and its kind label for result rows.
    fn build(&self) -> Result<(String, Graph)> {
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading graph file {}", path.display()))?;
            let g = Graph::from_edge_list_text(&text)?;
            if !g.is_connected() {
                bail!("graph file {} is not connected", path.display());
            }
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().replace(',', "_"))
                .unwrap_or_else(|| "file".into());
            Ok((label, g))
        } else {
            let kind = self
                .kind
                .ok_or_else(|| anyhow!("pass --kind with --n, or --graph FILE"))?;
            let n = self.n.ok_or_else(|| anyhow!("--kind needs --n"))?;
            let g = generate(kind, n, self.p, self.graph_seed)?;
            Ok((kind.name().to_string(), g))
        }
    }
}

/// Optional file-based settings for `bench`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchConfig {
    suite: Option<Suite>,
    trials: Option<u64>,
    seed: Option<u64>,
    reproducible: Option<bool>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns `Ok(false)` when a result row failed its bound.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate { kind, n, p, seed, out } => {
            let g = generate(kind, n, p, seed)?;
            write_output(out.as_deref(), &g.to_edge_list_text())?;
            Ok(true)
        }
        Command::Decompose { graph, k, out } => {
            let (_, g) = graph.build()?;
            let dec = decompose(&g, k)?;
            let mut text = dec.to_json_string();
            text.push('\n');
            write_output(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Eval {
            graph,
            k,
            strategy,
            gambler,
            unknown,
            trials,
            seed,
            format,
            out,
        } => {
            let (kind_label, g) = graph.build()?;
            let spec = GamblerSpec::parse(&gambler)?;
            let (gambler_name, model) = spec.build(&g, seed)?;
            let row = run_instance(
                &Instance {
                    graph_kind: &kind_label,
                    graph: &g,
                    k,
                    strategy,
                    gambler_name: &gambler_name,
                    gambler: &model,
                    known: !unknown,
                },
                trials,
                seed,
            )?;
            let text = match format {
                Format::Csv => format!("{CSV_HEADER}\n{}\n", row.csv_line()),
                Format::Json => format!("{}\n", serde_json::to_string(&row)?),
            };
            write_output(out.as_deref(), &text)?;
            Ok(row.pass)
        }
        Command::Bench {
            suite,
            trials,
            seed,
            reproducible,
            config,
            out,
        } => {
            let file: BenchConfig = match &config {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("reading config {}", path.display()))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing config {}", path.display()))?
                }
                None => BenchConfig::default(),
            };
            let suite = suite
                .or(file.suite)
                .ok_or_else(|| anyhow!("pass --suite or a config file with a \"suite\" entry"))?;
            let trials = trials.or(file.trials).unwrap_or(0);
            let seed = seed.or(file.seed).unwrap_or(0);
            let reproducible = reproducible || file.reproducible.unwrap_or(false);

            let report = run_suite(suite, seed, trials)?;
            let mut text = String::new();
            if !reproducible {
                let stamp = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .expect("clock after 1970")
                    .as_secs();
                text.push_str(&format!("# generated_at_unix {stamp}\n"));
            }
            text.push_str(CSV_HEADER);
            text.push('\n');
            for row in &report.rows {
                text.push_str(&row.csv_line());
                text.push('\n');
            }
            write_output(out.as_deref(), &text)?;
            for line in summary_lines(suite, &report) {
                eprintln!("{line}");
            }
            Ok(report.rows.iter().all(|r| r.pass))
        }
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
