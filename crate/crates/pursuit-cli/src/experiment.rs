//! One experiment instance — a graph, k cops, a strategy, and a gambler —
//! reduced to a result row with exact and simulated capture times.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use pursuit_core::engine::{exact_expected_capture_time, monte_carlo};
use pursuit_core::gambler::{adversarial_suite, changing_suite, random_distribution, GamblerModel};
use pursuit_core::graph::Graph;
use pursuit_core::schedule::{
    changing_two_part, dfs_patrol, diameter_chase, top_k_sit, CopSchedule,
};
use pursuit_core::sector::decompose;
use serde::Serialize;

/// Slack added to every bound comparison before declaring failure.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Column names shared by `eval` and `bench` output.
pub const CSV_HEADER: &str = "graph_kind,n,k,strategy,gambler,exact_E,mc_mean,mc_ci,bound,pass";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum StrategyName {
    /// Sit forever on the k most probable vertices (needs a known static
    /// distribution).
    TopKSit,
    /// Patrol sector Euler tours in a random direction each round; never
    /// reads the gambler's distributions.
    DfsPatrol,
    /// Per round, walk to the best sector vertex for the round's second
    /// part, then sit there (needs known distributions).
    ChangingTwoPart,
    /// Every diameter-many turns, re-target the k most probable vertices
    /// of the round's final turn (needs known distributions).
    DiameterChase,
}

impl StrategyName {
    pub fn name(self) -> &'static str {
        match self {
            StrategyName::TopKSit => "top_k_sit",
            StrategyName::DfsPatrol => "dfs_patrol",
            StrategyName::ChangingTwoPart => "changing_two_part",
            StrategyName::DiameterChase => "diameter_chase",
        }
    }
}

/// Parsed `--gambler` argument; materialized against a concrete graph.
#[derive(Debug, Clone)]
pub enum GamblerSpec {
    /// A named entry of the deterministic corpus for the graph.
    Corpus(String),
    /// Static distribution drawn with an explicit seed (`random:SEED`).
    Seeded(u64),
    /// Random periodic schedule of the given period (`changing:P`).
    Changing(usize),
    /// Explicit JSON schedule file (`@path`).
    File(PathBuf),
}

impl GamblerSpec {
    pub fn parse(text: &str) -> Result<GamblerSpec> {
        if let Some(path) = text.strip_prefix('@') {
            return Ok(GamblerSpec::File(PathBuf::from(path)));
        }
        if let Some(arg) = text.strip_prefix("random:") {
            let seed = arg
                .parse()
                .with_context(|| format!("bad seed in random:{arg}"))?;
            return Ok(GamblerSpec::Seeded(seed));
        }
        if let Some(arg) = text.strip_prefix("changing:") {
            let period: usize = arg
                .parse()
                .with_context(|| format!("bad period in changing:{arg}"))?;
            if period == 0 {
                bail!("changing:P needs a period of at least 1");
            }
            return Ok(GamblerSpec::Changing(period));
        }
        Ok(GamblerSpec::Corpus(text.to_string()))
    }

    /// Builds the concrete model for `g`. `seed` feeds only the
    /// `changing:P` variant; every other spec pins its own randomness.
    pub fn build(&self, g: &Graph, seed: u64) -> Result<(String, GamblerModel)> {
        match self {
            GamblerSpec::Corpus(name) => adversarial_suite(g)
                .into_iter()
                .find(|(label, _)| label == name)
                .ok_or_else(|| {
                    anyhow!(
                        "unknown gambler {name:?}; expected uniform, point_eccentric, \
                         geometric_depth, leaf_mass, random_0, random_1, random:SEED, \
                         changing:P, or @file.json"
                    )
                }),
            GamblerSpec::Seeded(s) => Ok((
                format!("random_s{s}"),
                GamblerModel::from_distribution(random_distribution(g.n(), *s)),
            )),
            GamblerSpec::Changing(p) => Ok(changing_suite(g, &[*p], seed).remove(0)),
            GamblerSpec::File(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading gambler file {}", path.display()))?;
                let model = GamblerModel::from_json_str(&text)
                    .with_context(|| format!("parsing gambler file {}", path.display()))?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().replace(',', "_"))
                    .unwrap_or_else(|| "file".into());
                Ok((name, model))
            }
        }
    }
}

/// One result row; the field order matches [`CSV_HEADER`].
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub graph_kind: String,
    pub n: usize,
    pub k: usize,
    pub strategy: &'static str,
    pub gambler: String,
    #[serde(rename = "exact_E")]
    pub exact_e: f64,
    pub mc_mean: Option<f64>,
    pub mc_ci: Option<f64>,
    pub bound: f64,
    pub pass: bool,
}

impl Row {
    pub fn csv_line(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.graph_kind,
            self.n,
            self.k,
            self.strategy,
            self.gambler,
            self.exact_e,
            opt(self.mc_mean),
            opt(self.mc_ci),
            self.bound,
            self.pass
        )
    }
}

/// Builds the cop schedule for a strategy and returns it with the bound
/// the result row is judged against. `known` says whether the cops get to
/// see the gambler's distributions before committing to a schedule.
pub fn build_schedule(
    g: &Graph,
    k: usize,
    strategy: StrategyName,
    m: &GamblerModel,
    known: bool,
) -> Result<(CopSchedule, f64)> {
    let ratio = g.n() as f64 / k as f64;
    let need_known = |what: &str| -> Result<()> {
        if known {
            Ok(())
        } else {
            bail!(
                "{what} reads the gambler's distributions and cannot be used \
                 with --unknown; dfs_patrol is the distribution-free strategy"
            )
        }
    };
    match strategy {
        StrategyName::TopKSit => {
            need_known("top_k_sit")?;
            if !m.is_static() {
                bail!(
                    "top_k_sit sits on the top vertices of a single distribution, \
                     but this gambler changes distribution every turn (period {}); \
                     use changing_two_part or diameter_chase",
                    m.period()
                );
            }
            Ok((top_k_sit(m.distribution_at(1), k), ratio.max(1.0)))
        }
        StrategyName::DfsPatrol => {
            let dec = decompose(g, k)?;
            Ok((dfs_patrol(&dec), 3.94 * ratio + 1.16))
        }
        StrategyName::ChangingTwoPart => {
            need_known("changing_two_part")?;
            let dec = decompose(g, k)?;
            let tp = changing_two_part(&dec, m)?;
            Ok((tp.schedule, 6.33 * ratio + 3.17))
        }
        StrategyName::DiameterChase => {
            need_known("diameter_chase")?;
            let chase = diameter_chase(g, m, k)?;
            Ok((chase.schedule, 1.0 + chase.diameter as f64 * ratio))
        }
    }
}

/// Everything a single evaluation needs, borrowed from the caller.
pub struct Instance<'a> {
    pub graph_kind: &'a str,
    pub graph: &'a Graph,
    pub k: usize,
    pub strategy: StrategyName,
    pub gambler_name: &'a str,
    pub gambler: &'a GamblerModel,
    pub known: bool,
}

/// Evaluates one instance exactly (always) and by simulation (when
/// `trials > 0`), and judges the strategy's bound.
pub fn run_instance(inst: &Instance, trials: u64, seed: u64) -> Result<Row> {
    if inst.k == 0 {
        bail!("need at least one cop");
    }
    let g = inst.graph;
    if inst.gambler.n() != g.n() {
        bail!(
            "gambler is over {} vertices but the graph has {}",
            inst.gambler.n(),
            g.n()
        );
    }
    let (schedule, bound) =
        build_schedule(g, inst.k, inst.strategy, inst.gambler, inst.known)?;
    let exact = exact_expected_capture_time(g, &schedule, inst.gambler)?;
    let mc = if trials > 0 {
        Some(monte_carlo(g, &schedule, inst.gambler, trials, seed)?)
    } else {
        None
    };
    Ok(Row {
        graph_kind: inst.graph_kind.to_string(),
        n: g.n(),
        k: inst.k,
        strategy: inst.strategy.name(),
        gambler: inst.gambler_name.to_string(),
        exact_e: exact.expected,
        mc_mean: mc.as_ref().map(|s| s.mean),
        mc_ci: mc.as_ref().map(|s| s.ci_half_width),
        bound,
        pass: exact.expected <= bound + BOUND_TOLERANCE,
    })
}
