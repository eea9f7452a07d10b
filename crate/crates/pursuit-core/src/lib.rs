//! Pursuit games on graphs between patrolling cops and a gambler who
//! re-samples a vertex every turn from a (possibly periodic) distribution.
//!
//! The crate provides:
//!
//! * [`graph`] — undirected connected graphs, generators, BFS utilities;
//! * [`tree`] — rooted trees, spanning trees, and pause-augmented
//!   depth-first tours;
//! * [`sector`] — partition of a spanning tree into at most `k` connected
//!   sectors of size at most `2n/k + 1`, overlapping only at shared
//!   vertices;
//! * [`gambler`] — per-turn vertex distributions, static or periodic, plus
//!   the adversarial test corpus;
//! * [`schedule`] — open-loop cop schedules and the strategy builders
//!   (`top_k_sit`, `dfs_patrol`, `changing_two_part`, `diameter_chase`);
//! * [`engine`] — game simulation, seeded parallel Monte Carlo, and exact
//!   closed-form expected capture times via renewal evaluation.

pub mod engine;
pub mod error;
pub mod gambler;
pub mod graph;
mod num;
pub mod schedule;
pub mod sector;
pub mod tree;

pub use engine::{
    capture_model, exact_expected_capture_time, exact_expected_time, monte_carlo,
    round_evasion_bound_check, simulate, CaptureModel, CaptureStats, EvasionCheck, ExactValue,
    GameOutcome, TURN_CAP,
};
pub use error::{Error, Result};
pub use gambler::{adversarial_suite, changing_suite, Distribution, GamblerModel};
pub use graph::{generate, Graph, GraphKind, Vertex};
pub use schedule::{
    changing_two_part, dfs_patrol, diameter_chase, top_k_sit, walk_then_sit, ChaseSchedule,
    CopSchedule, TwoPartSchedule,
};
pub use sector::{decompose, SectorDecomposition, Threshold};
pub use tree::{euler_tour_with_pauses, spanning_tree, RootedTree};
