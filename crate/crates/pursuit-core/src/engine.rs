//! Game semantics: simulation, Monte Carlo aggregation, and exact
//! closed-form expected capture time.
//!
//! # Game model
//!
//! Turns are counted from 1. On turn `t` the cops stand where the schedule
//! puts them (groups redraw an alternative at each round start), the
//! adversary independently samples a vertex from `distribution_at(t)`, and
//! capture occurs exactly when the sampled vertex is occupied. The capture
//! turn `T` counts the capturing turn itself, so a turn-1 capture gives
//! `T = 1`. There are no edge-crossing captures.
//!
//! # Exact evaluation
//!
//! For an open-loop schedule the capture probability of each turn depends
//! only on the turn index and the current round's alternative draws, so
//! `E[T]` has a closed form. [`capture_model`] expands the schedule and
//! gambler over their combined period `M = lcm(round_len, P)` and records,
//! per round window and per joint alternative (the cartesian product over
//! group choices, with occupied sets unioned), the per-turn capture
//! probabilities. Each window's draws are independent, so survival
//! expectations multiply across windows, and whole periods of `M` turns
//! renew: with `ᾱ` the mean survival of a full period and `β̄` the mean
//! within-period capture-turn contribution,
//!
//! ```text
//! E[T] = (β̄ + M·ᾱ) / (1 − ᾱ)
//! ```
//!
//! prefixed by a turn-by-turn pass over the deterministic lead-in. The
//! complement `1 − ᾱ` is accumulated from per-alternative `expm1`/`ln_1p`
//! terms so near-certain survival does not cancel catastrophically.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gambler::GamblerModel;
use crate::graph::{Graph, Vertex};
use crate::num::lcm;
use crate::schedule::CopSchedule;

/// Simulation gives up after this many turns.
pub const TURN_CAP: u64 = 10_000_000;

/// Exact evaluation refuses instances whose per-period capture probability
/// is below this (but nonzero): the renewal quotient would amplify noise.
pub const DEGENERACY_THRESHOLD: f64 = 1e-15;

/// Cap on the joint alternative count expanded by [`capture_model`].
const MAX_JOINT_ALTERNATIVES: usize = 1 << 14;

/// One simulated game.
#[derive(Debug, Clone, Serialize)]
pub struct GameOutcome {
    pub capture_turn: u64,
    pub capture_vertex: Vertex,
    pub trace: Option<Vec<TraceStep>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub turn: u64,
    pub gambler: Vertex,
    pub occupied: Vec<Vertex>,
}

/// Monte Carlo aggregate over independent trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaptureStats {
    pub trials: u64,
    pub mean: f64,
    pub std_dev: f64,
    /// 95% confidence half-width, `1.96 · sd / √trials`.
    pub ci_half_width: f64,
    pub seed: u64,
}

/// Closed-form evaluation result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactValue {
    pub expected: f64,
    /// Mean survival probability of one full period (after the lead-in).
    pub round_survival: f64,
    /// Turns per period: `lcm(round_len, gambler period)`.
    pub super_period: usize,
}

/// Capture probabilities of one round window of the expanded period.
#[derive(Debug, Clone)]
pub struct RoundWindow {
    /// Joint alternative weights; sum to 1.
    pub weights: Vec<f64>,
    /// `probs[a][j]` = capture probability on the window's `j`-th turn
    /// under joint alternative `a`.
    pub probs: Vec<Vec<f64>>,
}

/// A schedule and gambler reduced to pure capture probabilities.
#[derive(Debug, Clone)]
pub struct CaptureModel {
    /// Deterministic lead-in capture probabilities, one per turn.
    pub prefix: Vec<f64>,
    /// Turns per schedule round.
    pub round_len: usize,
    /// `lcm(round_len, P) / round_len` windows covering one period.
    pub windows: Vec<RoundWindow>,
}

impl CaptureModel {
    pub fn super_period(&self) -> usize {
        self.round_len * self.windows.len()
    }
}

/// Expands `(schedule, gambler)` into per-turn capture probabilities over
/// one combined period. Group choices multiply into joint alternatives
/// with their occupied sets unioned, which keeps the evaluation exact even
/// when groups collide on shared vertices; the joint count is capped to
/// keep the expansion tractable.
pub fn capture_model(g: &Graph, s: &CopSchedule, m: &GamblerModel) -> Result<CaptureModel> {
    s.validate(g)?;
    if m.n() != g.n() {
        return Err(Error::Incompatible(format!(
            "gambler over {} vertices, graph over {}",
            m.n(),
            g.n()
        )));
    }
    let joint = s.alternative_count();
    if joint > MAX_JOINT_ALTERNATIVES {
        return Err(Error::InvalidParams(format!(
            "{joint} joint alternatives exceed the exact-evaluation cap {MAX_JOINT_ALTERNATIVES}; \
             use Monte Carlo"
        )));
    }
    // A set covering every vertex captures with probability exactly 1, no
    // matter how the distribution's entries round.
    let occupied_mass = |set: &BTreeSet<Vertex>, turn: u64| -> f64 {
        if set.len() == g.n() {
            1.0
        } else {
            m.distribution_at(turn).mass_on(set).clamp(0.0, 1.0)
        }
    };
    let prefix: Vec<f64> = s
        .prefix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let set: BTreeSet<Vertex> = row.iter().copied().collect();
            occupied_mass(&set, i as u64 + 1)
        })
        .collect();

    let l = s.round_len;
    let window_count = lcm(l, m.period()) / l;
    let mut windows = vec![
        RoundWindow { weights: vec![0.0; joint], probs: vec![vec![0.0; l]; joint] };
        window_count
    ];
    for a in 0..joint {
        let choice = s.decode_alternative(a);
        let weight: f64 = s
            .groups
            .iter()
            .zip(&choice)
            .map(|(group, &c)| group.alternatives[c].weight)
            .product();
        let sets = s.occupied_sets(a);
        for (r, window) in windows.iter_mut().enumerate() {
            window.weights[a] = weight;
            for (j, set) in sets.iter().enumerate() {
                let turn = (prefix.len() + r * l + j) as u64 + 1;
                window.probs[a][j] = occupied_mass(set, turn);
            }
        }
    }
    Ok(CaptureModel { prefix, round_len: l, windows })
}

/// Per-window mixture survival prefix and stable complement of the
/// window's full survival.
fn window_survival(window: &RoundWindow, l: usize) -> (Vec<f64>, f64) {
    let mut mix = vec![0.0; l + 1];
    let mut complement = 0.0;
    for (w, q_seq) in window.weights.iter().zip(&window.probs) {
        let mut run = 1.0;
        let mut log_surv = 0.0;
        mix[0] += w;
        for (j, &q) in q_seq.iter().enumerate() {
            run *= 1.0 - q;
            mix[j + 1] += w * run;
            log_surv += (-q).ln_1p();
        }
        complement += w * (-log_surv.exp_m1());
    }
    (mix, complement)
}

/// Evaluates a capture model to its exact expected capture turn.
pub fn evaluate(model: &CaptureModel) -> Result<ExactValue> {
    let l = model.round_len;
    let period = model.super_period();

    let mut expected = 0.0;
    let mut lead_survival = 1.0;
    for (i, &q) in model.prefix.iter().enumerate() {
        expected += (i + 1) as f64 * lead_survival * q;
        lead_survival *= 1.0 - q;
    }

    // One pass over the period: capture-turn mass (beta), survival of the
    // whole period (alpha, tracked by its complement), both as mixtures.
    let mut alpha_before = 1.0;
    let mut beta = 0.0;
    let mut complement = 0.0;
    for (r, window) in model.windows.iter().enumerate() {
        let (mix, window_complement) = window_survival(window, l);
        for j in 1..=l {
            beta += alpha_before * (r * l + j) as f64 * (mix[j - 1] - mix[j]);
        }
        complement += alpha_before * window_complement;
        alpha_before *= 1.0 - window_complement;
    }
    let alpha = alpha_before;

    if lead_survival > 0.0 {
        if complement == 0.0 {
            return Err(Error::NeverCaptured);
        }
        if complement <= DEGENERACY_THRESHOLD {
            return Err(Error::NumericalDegeneracy(complement));
        }
        let cycle = (beta + period as f64 * alpha) / complement;
        expected += lead_survival * (model.prefix.len() as f64 + cycle);
    }
    debug_assert!(expected >= 1.0 - 1e-9, "capture turns start at 1, got {expected}");
    Ok(ExactValue { expected, round_survival: alpha, super_period: period })
}

/// Exact expected capture turn for i.i.d. rounds given directly as
/// weighted capture-probability sequences (all of one common length).
pub fn exact_expected_time(per_round: &[(f64, Vec<f64>)]) -> Result<ExactValue> {
    if per_round.is_empty() {
        return Err(Error::EmptySchedule);
    }
    let l = per_round[0].1.len();
    if l == 0 {
        return Err(Error::EmptySchedule);
    }
    let mut total = 0.0;
    for (w, q_seq) in per_round {
        if q_seq.len() != l {
            return Err(Error::LengthMismatch { expected: l, got: q_seq.len() });
        }
        // NaN weights fail here too, not just non-positive ones.
        if *w <= 0.0 || w.is_nan() {
            return Err(Error::InvalidParams(format!("alternative weight {w} must be positive")));
        }
        for &q in q_seq {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidParams(format!("capture probability {q} outside [0, 1]")));
            }
        }
        total += w;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParams(format!("weights sum to {total}, not 1")));
    }
    let window = RoundWindow {
        weights: per_round.iter().map(|(w, _)| *w).collect(),
        probs: per_round.iter().map(|(_, q)| q.clone()).collect(),
    };
    evaluate(&CaptureModel { prefix: Vec::new(), round_len: l, windows: vec![window] })
}

/// Exact expected capture turn of a schedule against a gambler.
pub fn exact_expected_capture_time(g: &Graph, s: &CopSchedule, m: &GamblerModel) -> Result<ExactValue> {
    evaluate(&capture_model(g, s, m)?)
}

/// The quantities behind the per-round evasion argument for patrol
/// schedules that occupy every vertex at least twice per round.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvasionCheck {
    /// Exact mean survival of one full round.
    pub round_survival: f64,
    /// `Π_v (1 − p_v)²` over all vertices.
    pub product_bound: f64,
    /// `e⁻²`, the distribution-free ceiling of the product bound.
    pub limit: f64,
}

/// Computes the exact per-round survival of a static-gambler schedule
/// together with the twice-covered product bound it should sit below.
pub fn round_evasion_bound_check(g: &Graph, s: &CopSchedule, m: &GamblerModel) -> Result<EvasionCheck> {
    if !m.is_static() {
        return Err(Error::Incompatible(
            "per-round evasion analysis needs a static gambler".into(),
        ));
    }
    let model = capture_model(g, s, m)?;
    debug_assert_eq!(model.windows.len(), 1, "static gambler expands to one window");
    let mut survival = 1.0;
    for window in &model.windows {
        let (_, complement) = window_survival(window, model.round_len);
        survival *= 1.0 - complement;
    }
    let product_bound = m
        .distribution_at(1)
        .probs()
        .iter()
        .map(|&p| (1.0 - p) * (1.0 - p))
        .product();
    Ok(EvasionCheck { round_survival: survival, product_bound, limit: (-2.0f64).exp() })
}

/// Plays one game. The caller's rng drives both the per-round alternative
/// draws (one per group, in group order, at each round start) and the
/// gambler's samples, so a seeded rng reproduces the game exactly.
pub fn simulate<R: Rng + ?Sized>(
    g: &Graph,
    s: &CopSchedule,
    m: &GamblerModel,
    rng: &mut R,
    record_trace: bool,
) -> Result<GameOutcome> {
    if m.n() != g.n() {
        return Err(Error::Incompatible(format!(
            "gambler over {} vertices, graph over {}",
            m.n(),
            g.n()
        )));
    }
    let lead = s.prefix.len() as u64;
    let l = s.round_len as u64;
    let mut choices: Vec<usize> = vec![0; s.groups.len()];
    let mut occupied: Vec<Vertex> = Vec::with_capacity(s.cop_count);
    let mut trace: Vec<TraceStep> = Vec::new();
    for t in 1..=TURN_CAP {
        occupied.clear();
        if t <= lead {
            occupied.extend_from_slice(&s.prefix[(t - 1) as usize]);
        } else {
            let j = ((t - lead - 1) % l) as usize;
            if j == 0 {
                for (slot, group) in choices.iter_mut().zip(&s.groups) {
                    let mut r: f64 = rng.gen();
                    *slot = group.alternatives.len() - 1;
                    for (a, alt) in group.alternatives.iter().enumerate() {
                        r -= alt.weight;
                        if r < 0.0 {
                            *slot = a;
                            break;
                        }
                    }
                }
            }
            for (group, &choice) in s.groups.iter().zip(&choices) {
                for row in &group.alternatives[choice].positions {
                    occupied.push(row[j]);
                }
            }
        }
        let v = m.sample(t, rng);
        let hit = occupied.contains(&v);
        if record_trace {
            let mut sorted = occupied.clone();
            sorted.sort_unstable();
            sorted.dedup();
            trace.push(TraceStep { turn: t, gambler: v, occupied: sorted });
        }
        if hit {
            return Ok(GameOutcome {
                capture_turn: t,
                capture_vertex: v,
                trace: record_trace.then_some(trace),
            });
        }
    }
    Err(Error::TurnCapExceeded { cap: TURN_CAP })
}

/// The `i`-th stream seed of a splitmix64 sequence started at `seed`.
fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed.wrapping_add((trial + 1).wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Runs independent seeded trials in parallel. Each trial gets its own rng
/// stream derived from `(seed, trial index)`, and the aggregation sums
/// integers, so the result does not depend on thread scheduling.
pub fn monte_carlo(
    g: &Graph,
    s: &CopSchedule,
    m: &GamblerModel,
    trials: u64,
    seed: u64,
) -> Result<CaptureStats> {
    if trials == 0 {
        return Err(Error::InvalidParams("need at least one trial".into()));
    }
    s.validate(g)?;
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(u64, u128)> {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, i));
            let outcome = simulate(g, s, m, &mut rng, false)?;
            Ok((outcome.capture_turn, (outcome.capture_turn as u128) * (outcome.capture_turn as u128)))
        })
        .try_reduce(|| (0u64, 0u128), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let n = trials as f64;
    let mean = sum as f64 / n;
    let std_dev = if trials > 1 {
        // n·Σx² − (Σx)² is exact in integers; no cancellation.
        let numerator = (trials as u128 * sum_sq) - (sum as u128 * sum as u128);
        (numerator as f64 / (n * (n - 1.0))).sqrt()
    } else {
        0.0
    };
    Ok(CaptureStats {
        trials,
        mean,
        std_dev,
        ci_half_width: 1.96 * std_dev / n.sqrt(),
        seed,
    })
}
