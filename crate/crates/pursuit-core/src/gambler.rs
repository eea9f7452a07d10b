//! Randomized vertex-sampling adversaries ("gamblers").
//!
//! A gambler is a periodic schedule of probability distributions over the
//! graph's vertices; on turn `t` (1-based) it samples a vertex i.i.d. from
//! `schedule[(t - 1) mod P]`. A static gambler is the `P = 1` special case.
//!
//! Distributions are validated on construction: no negative entries, and
//! the total must be within `1e-12` of 1, after which entries are
//! renormalized so they sum to exactly 1.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::spanning_tree;

/// Additive slack allowed on an input probability total before rejection.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A validated probability distribution over vertices `0..n`.
/// Neumaier-compensated summation; exact to one final rounding for the
/// magnitudes seen here.
fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut correction = 0.0;
    for &x in xs {
        let t = sum + x;
        correction += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + correction
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    p: Vec<f64>,
    /// Cumulative sums, last entry pinned to 1.0, for inverse-CDF sampling.
    cdf: Vec<f64>,
}

impl Distribution {
    pub fn new(p: Vec<f64>) -> Result<Distribution> {
        if p.is_empty() {
            return Err(Error::EmptySchedule);
        }
        for (index, &value) in p.iter().enumerate() {
            // NaN is rejected here too, not just strictly negative values.
            if value < 0.0 || value.is_nan() {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum = compensated_sum(&p);
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::ProbabilitySum { sum, tolerance: SUM_TOLERANCE });
        }
        // Compensated normalization keeps every entry within a couple of
        // ulps of its true share, so identical inputs stay exactly tied
        // (ties in top_k break by index) and no single entry absorbs the
        // accumulated rounding of the others.
        let p: Vec<f64> = p.into_iter().map(|v| v / sum).collect();
        debug_assert!((compensated_sum(&p) - 1.0).abs() < 1e-12);
        let mut cdf = Vec::with_capacity(p.len());
        let mut acc = 0.0;
        for &v in &p {
            acc += v;
            cdf.push(acc);
        }
        *cdf.last_mut().unwrap() = 1.0;
        Ok(Distribution { p, cdf })
    }

    pub fn uniform(n: usize) -> Distribution {
        Distribution::new(vec![1.0 / n as f64; n]).expect("uniform is valid")
    }

    pub fn point_mass(n: usize, v: Vertex) -> Distribution {
        let mut p = vec![0.0; n];
        p[v] = 1.0;
        Distribution::new(p).expect("point mass is valid")
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// Total probability mass on a set of vertices.
    pub fn mass_on<'a>(&self, verts: impl IntoIterator<Item = &'a Vertex>) -> f64 {
        verts.into_iter().map(|&v| self.p[v]).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vertex {
        let r: f64 = rng.gen();
        // First index whose cumulative sum exceeds r; zero-probability
        // vertices have empty half-open intervals and are never drawn.
        self.cdf.partition_point(|&c| c <= r).min(self.p.len() - 1)
    }

    /// The `k` most probable vertices, ties broken toward lower indices,
    /// truncated to `n` if `k > n`.
    pub fn top_k(&self, k: usize) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = (0..self.p.len()).collect();
        order.sort_by(|&a, &b| self.p[b].total_cmp(&self.p[a]).then(a.cmp(&b)));
        order.truncate(k.min(self.p.len()));
        order
    }
}

/// A periodic gambler model.
#[derive(Debug, Clone, PartialEq)]
pub struct GamblerModel {
    schedule: Vec<Distribution>,
}

#[derive(Serialize, Deserialize)]
struct GamblerDto {
    schedule: Vec<Vec<f64>>,
}

impl GamblerModel {
    pub fn make_static(p: Vec<f64>) -> Result<GamblerModel> {
        Ok(GamblerModel {
            schedule: vec![Distribution::new(p)?],
        })
    }

    pub fn from_distribution(d: Distribution) -> GamblerModel {
        GamblerModel { schedule: vec![d] }
    }

    /// Builds a periodic model from per-phase probability vectors. All
    /// phases must have the same length.
    pub fn make_changing(phases: Vec<Vec<f64>>) -> Result<GamblerModel> {
        if phases.is_empty() {
            return Err(Error::EmptySchedule);
        }
        let n = phases[0].len();
        let schedule: Vec<Distribution> = phases
            .into_iter()
            .map(|p| {
                if p.len() != n {
                    return Err(Error::LengthMismatch { expected: n, got: p.len() });
                }
                Distribution::new(p)
            })
            .collect::<Result<_>>()?;
        Ok(GamblerModel { schedule })
    }

    pub fn period(&self) -> usize {
        self.schedule.len()
    }

    pub fn is_static(&self) -> bool {
        self.schedule.len() == 1
    }

    /// Number of vertices the model ranges over.
    pub fn n(&self) -> usize {
        self.schedule[0].len()
    }

    /// The distribution in force on 1-based turn `turn`.
    pub fn distribution_at(&self, turn: u64) -> &Distribution {
        assert!(turn >= 1, "turns are 1-based");
        &self.schedule[((turn - 1) % self.schedule.len() as u64) as usize]
    }

    pub fn sample<R: Rng + ?Sized>(&self, turn: u64, rng: &mut R) -> Vertex {
        self.distribution_at(turn).sample(rng)
    }

    pub fn to_json_string(&self) -> String {
        let dto = GamblerDto {
            schedule: self.schedule.iter().map(|d| d.probs().to_vec()).collect(),
        };
        serde_json::to_string_pretty(&dto).expect("gambler serializes")
    }

    pub fn from_json_str(text: &str) -> Result<GamblerModel> {
        let dto: GamblerDto = serde_json::from_str(text)?;
        GamblerModel::make_changing(dto.schedule)
    }
}

// ----------------------------------------------------------------------
// Adversarial corpus
// ----------------------------------------------------------------------

/// Deterministic static test distributions for a graph: uniform mass, a
/// point mass on an eccentric vertex, geometric decay by BFS depth, mass
/// spread over BFS-tree leaves, and two seeded random distributions.
pub fn adversarial_suite(g: &Graph) -> Vec<(String, GamblerModel)> {
    let n = g.n();
    let mut out = Vec::new();
    out.push(("uniform".to_string(), GamblerModel::from_distribution(Distribution::uniform(n))));

    // Point mass on the vertex farthest from 0 (lowest index on ties).
    let dist = g.bfs_distances(0).expect("corpus graphs are connected");
    let far = (0..n).max_by_key(|&v| (dist[v], std::cmp::Reverse(v))).unwrap();
    out.push((
        "point_eccentric".to_string(),
        GamblerModel::from_distribution(Distribution::point_mass(n, far)),
    ));

    // Geometric decay with BFS depth: weight 2^-depth(v).
    let weights: Vec<f64> = dist.iter().map(|&d| (0.5f64).powi(d as i32)).collect();
    let total: f64 = weights.iter().sum();
    let geometric = Distribution::new(weights.iter().map(|w| w / total).collect()).unwrap();
    out.push(("geometric_depth".to_string(), GamblerModel::from_distribution(geometric)));

    // Uniform over the leaves of the BFS spanning tree (the whole graph if
    // the tree is a single vertex).
    let tree = spanning_tree(g, 0).expect("corpus graphs are connected");
    let leaves: BTreeSet<Vertex> = tree.vertices().filter(|&v| tree.children(v).is_empty()).collect();
    let leaf_dist = if leaves.is_empty() {
        Distribution::uniform(n)
    } else {
        let p: Vec<f64> = (0..n)
            .map(|v| if leaves.contains(&v) { 1.0 / leaves.len() as f64 } else { 0.0 })
            .collect();
        Distribution::new(p).unwrap()
    };
    out.push(("leaf_mass".to_string(), GamblerModel::from_distribution(leaf_dist)));

    for (i, seed) in [0xADBEEFu64, 0x5EED5EEDu64].into_iter().enumerate() {
        out.push((format!("random_{i}"), GamblerModel::from_distribution(random_distribution(n, seed))));
    }
    out
}

/// Random periodic schedules of period `p`, seeded.
pub fn changing_suite(g: &Graph, periods: &[usize], seed: u64) -> Vec<(String, GamblerModel)> {
    periods
        .iter()
        .map(|&p| {
            let phases: Vec<Vec<f64>> = (0..p)
                .map(|i| random_distribution(g.n(), seed ^ (p as u64) << 32 ^ i as u64).probs().to_vec())
                .collect();
            (format!("changing_p{p}"), GamblerModel::make_changing(phases).unwrap())
        })
        .collect()
}

/// A seeded random distribution: i.i.d. exponential weights, normalized.
pub fn random_distribution(n: usize, seed: u64) -> Distribution {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    Distribution::new(weights.iter().map(|w| w / total).collect()).unwrap()
}
