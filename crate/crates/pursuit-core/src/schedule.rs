//! Open-loop cop schedules and the strategy builders.
//!
//! # Model
//!
//! A schedule moves `k` cops along graph edges (or holds them in place) on
//! a fixed timetable that never reacts to the adversary's draws. It has an
//! optional deterministic lead-in (`prefix`), followed by an endless
//! repetition of rounds of `round_len` turns. The cops are partitioned into
//! *groups*; at the start of every round each group independently draws one
//! of its weighted alternatives and its cops follow the drawn position
//! sequence for the round. Deterministic schedules are the one-group,
//! one-alternative special case.
//!
//! Within an alternative consecutive positions must be equal or adjacent,
//! and every (last-position, first-position) pair across alternatives of
//! the same group must be equal or adjacent so that any draw sequence is a
//! legal walk, including the wrap-around from one round to the next.
//!
//! # Strategies
//!
//! * [`top_k_sit`]: sit forever on the `k` most probable vertices.
//! * [`dfs_patrol`]: per-sector depth-first tours with a pause at each
//!   once-visited vertex, each sector independently running its tour
//!   forward or backward with probability 1/2 each round.
//! * [`changing_two_part`]: rounds of two equal parts against a periodic
//!   adversary; walk to the sector vertex with the highest average
//!   second-part probability, then sit out the second part there.
//! * [`diameter_chase`]: rounds of `diameter` turns; walk to the `k` most
//!   probable vertices of each round's final turn and sit there.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gambler::{Distribution, GamblerModel};
use crate::graph::{Graph, Vertex};
use crate::num::lcm;
use crate::sector::SectorDecomposition;
use crate::tree::euler_tour_with_pauses;

/// Slack allowed on an alternative-weight total.
const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Upper bound on the expanded period of a built schedule, as a guard
/// against pathological gambler periods.
const MAX_PERIOD: usize = 1 << 22;

/// One weighted per-round alternative for a group of cops.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlternative {
    pub weight: f64,
    /// `positions[i][t]` = vertex of the group's `i`-th cop on round turn
    /// `t` (0-based within the round).
    pub positions: Vec<Vec<Vertex>>,
}

/// A set of cops drawing from shared alternatives each round.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleGroup {
    /// Cop indices, ascending; groups partition `0..cop_count`.
    pub cops: Vec<usize>,
    pub alternatives: Vec<GroupAlternative>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopSchedule {
    pub cop_count: usize,
    /// Deterministic lead-in: `prefix[t][c]` = cop `c`'s vertex on turn
    /// `t + 1`. May be empty.
    pub prefix: Vec<Vec<Vertex>>,
    /// Turns per repeating round.
    pub round_len: usize,
    pub groups: Vec<ScheduleGroup>,
}

impl CopSchedule {
    /// A deterministic schedule: an optional lead-in, then one repeating
    /// per-cop position block.
    pub fn deterministic(prefix: Vec<Vec<Vertex>>, block: Vec<Vec<Vertex>>) -> CopSchedule {
        let cop_count = block.len();
        let round_len = block[0].len();
        CopSchedule {
            cop_count,
            prefix,
            round_len,
            groups: vec![ScheduleGroup {
                cops: (0..cop_count).collect(),
                alternatives: vec![GroupAlternative { weight: 1.0, positions: block }],
            }],
        }
    }

    /// Positions of all cops on turn 1.
    pub fn initial_positions(&self) -> Vec<Vertex> {
        if let Some(row) = self.prefix.first() {
            return row.clone();
        }
        let mut out = vec![0; self.cop_count];
        for group in &self.groups {
            for (i, &c) in group.cops.iter().enumerate() {
                out[c] = group.alternatives[0].positions[i][0];
            }
        }
        out
    }

    /// Number of distinct joint alternatives (the product over groups).
    pub fn alternative_count(&self) -> usize {
        self.groups.iter().map(|g| g.alternatives.len()).product()
    }

    /// Decodes a joint alternative index (mixed radix, group 0 least
    /// significant) into one alternative choice per group.
    pub fn decode_alternative(&self, mut index: usize) -> Vec<usize> {
        let mut choice = Vec::with_capacity(self.groups.len());
        for group in &self.groups {
            choice.push(index % group.alternatives.len());
            index /= group.alternatives.len();
        }
        assert_eq!(index, 0, "alternative index out of range");
        choice
    }

    /// Per-turn occupied vertex sets over one round for a joint alternative.
    pub fn occupied_sets(&self, alternative: usize) -> Vec<BTreeSet<Vertex>> {
        let choice = self.decode_alternative(alternative);
        (0..self.round_len)
            .map(|t| {
                let mut set = BTreeSet::new();
                for (g, group) in self.groups.iter().enumerate() {
                    for row in &group.alternatives[choice[g]].positions {
                        set.insert(row[t]);
                    }
                }
                set
            })
            .collect()
    }

    /// Per-turn occupied vertex sets over the lead-in.
    pub fn prefix_occupied(&self) -> Vec<BTreeSet<Vertex>> {
        self.prefix.iter().map(|row| row.iter().copied().collect()).collect()
    }

    /// Structural validation against a graph: group partition, weight
    /// totals, dimensions, vertex ranges, and every movement constraint
    /// (within alternatives, prefix-to-round, and round-to-round for all
    /// alternative pairs). Also requires a well-defined turn-1 position,
    /// i.e. all alternatives of a group must start at the same vertices
    /// when there is no lead-in.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSchedule(msg));
        if self.cop_count == 0 {
            return fail("no cops".into());
        }
        if self.round_len == 0 {
            return fail("round length must be positive".into());
        }
        let mut seen = vec![false; self.cop_count];
        for group in &self.groups {
            if group.cops.is_empty() || group.alternatives.is_empty() {
                return fail("empty group".into());
            }
            for &c in &group.cops {
                if c >= self.cop_count || seen[c] {
                    return fail(format!("cop {c} missing or assigned twice"));
                }
                seen[c] = true;
            }
            let total: f64 = group.alternatives.iter().map(|a| a.weight).sum();
            if (total - 1.0).abs() > WEIGHT_TOLERANCE || group.alternatives.iter().any(|a| a.weight <= 0.0) {
                return fail(format!("alternative weights sum to {total}, not 1"));
            }
            for alt in &group.alternatives {
                if alt.positions.len() != group.cops.len() {
                    return fail("alternative rows do not match group size".into());
                }
                for row in &alt.positions {
                    if row.len() != self.round_len {
                        return fail("alternative length differs from round length".into());
                    }
                    for &v in row {
                        if v >= g.n() {
                            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
                        }
                    }
                    for w in row.windows(2) {
                        if w[0] != w[1] && !g.has_edge(w[0], w[1]) {
                            return fail(format!("illegal move {} -> {}", w[0], w[1]));
                        }
                    }
                }
            }
            for a in &group.alternatives {
                for b in &group.alternatives {
                    for (ra, rb) in a.positions.iter().zip(&b.positions) {
                        let (last, first) = (*ra.last().unwrap(), rb[0]);
                        if last != first && !g.has_edge(last, first) {
                            return fail(format!("illegal round boundary {last} -> {first}"));
                        }
                    }
                }
                if self.prefix.is_empty() {
                    for (ra, rb) in a.positions.iter().zip(&group.alternatives[0].positions) {
                        if ra[0] != rb[0] {
                            return fail("alternatives disagree on the turn-1 position".into());
                        }
                    }
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return fail("some cop belongs to no group".into());
        }
        for row in &self.prefix {
            if row.len() != self.cop_count {
                return fail("prefix row does not list every cop".into());
            }
            for &v in row {
                if v >= g.n() {
                    return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
                }
            }
        }
        for rows in self.prefix.windows(2) {
            for (&a, &b) in rows[0].iter().zip(&rows[1]) {
                if a != b && !g.has_edge(a, b) {
                    return fail(format!("illegal prefix move {a} -> {b}"));
                }
            }
        }
        if let Some(last_row) = self.prefix.last() {
            for group in &self.groups {
                for alt in &group.alternatives {
                    for (i, &c) in group.cops.iter().enumerate() {
                        let (a, b) = (last_row[c], alt.positions[i][0]);
                        if a != b && !g.has_edge(a, b) {
                            return fail(format!("illegal prefix-to-round move {a} -> {b}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct AltDto<'a> {
            weight: f64,
            positions: &'a [Vec<Vertex>],
        }
        #[derive(Serialize)]
        struct GroupDto<'a> {
            cops: &'a [usize],
            alternatives: Vec<AltDto<'a>>,
        }
        #[derive(Serialize)]
        struct Dto<'a> {
            cop_count: usize,
            round_len: usize,
            initial_positions: Vec<Vertex>,
            prefix: &'a [Vec<Vertex>],
            groups: Vec<GroupDto<'a>>,
        }
        let dto = Dto {
            cop_count: self.cop_count,
            round_len: self.round_len,
            initial_positions: self.initial_positions(),
            prefix: &self.prefix,
            groups: self
                .groups
                .iter()
                .map(|g| GroupDto {
                    cops: &g.cops,
                    alternatives: g
                        .alternatives
                        .iter()
                        .map(|a| AltDto { weight: a.weight, positions: &a.positions })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("schedule serializes")
    }
}

// ----------------------------------------------------------------------
// Strategy builders
// ----------------------------------------------------------------------

/// All cops sit forever on the `k` most probable vertices of `d` (ties to
/// lower indices). With `k` above the vertex count, surplus cops double up
/// round-robin so every vertex is occupied.
pub fn top_k_sit(d: &Distribution, k: usize) -> CopSchedule {
    assert!(k >= 1, "need at least one cop");
    let targets = d.top_k(k);
    let block: Vec<Vec<Vertex>> = (0..k).map(|c| vec![targets[c % targets.len()]]).collect();
    CopSchedule::deterministic(Vec::new(), block)
}

/// One cop walks the given vertex sequence and then sits at its end.
pub fn walk_then_sit(path: &[Vertex]) -> CopSchedule {
    assert!(!path.is_empty());
    let last = *path.last().unwrap();
    CopSchedule::deterministic(path.iter().map(|&v| vec![v]).collect(), vec![vec![last]])
}

/// Per-sector depth-first patrol. Every round, each sector independently
/// runs its pause-augmented tour forward or backward (probability 1/2
/// each); shorter tours are padded by sitting at the sector root. Cops
/// sharing a sector follow identical positions. The builder reads only the
/// decomposition, never the adversary's distributions.
pub fn dfs_patrol(dec: &SectorDecomposition) -> CopSchedule {
    let tours: Vec<Vec<Vertex>> = dec
        .sectors
        .iter()
        .map(|s| euler_tour_with_pauses(&s.tree, false))
        .collect();
    let round_len = tours.iter().map(|t| t.len()).max().unwrap();
    let pad = |mut tour: Vec<Vertex>| {
        let last = *tour.last().unwrap();
        tour.resize(round_len, last);
        tour
    };
    let groups = dec
        .sectors
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let cops = dec.cops_of_sector(i);
            let forward = pad(tours[i].clone());
            let mut backward: Vec<Vertex> = tours[i].clone();
            backward.reverse();
            let backward = pad(backward);
            let alternatives = [forward, backward]
                .into_iter()
                .map(|seq| GroupAlternative {
                    weight: 0.5,
                    positions: vec![seq; cops.len()],
                })
                .collect();
            ScheduleGroup { cops, alternatives }
        })
        .collect();
    CopSchedule {
        cop_count: dec.k,
        prefix: Vec::new(),
        round_len,
        groups,
    }
}

/// A two-part-round schedule against a known periodic gambler.
#[derive(Debug)]
pub struct TwoPartSchedule {
    pub schedule: CopSchedule,
    /// Turns per part; the round is `2 * part_len` turns.
    pub part_len: usize,
    /// `targets[r][i]` = sector `i`'s target in round `r` (one entry per
    /// round of the expanded period).
    pub targets: Vec<Vec<Vertex>>,
}

/// For each round of `2 * ceil(2n/k + 1)` turns and each sector, walks to
/// the sector vertex with the highest average probability over the round's
/// second part, then sits there for the whole second part. Sector index
/// order breaks target conflicts; a losing sector takes its next-best
/// vertex. The schedule is expanded over `lcm(round, gambler period)` turns
/// so it is exactly periodic; each round starts from the previous round's
/// target (cyclically, so round 0 starts from the last round's target).
pub fn changing_two_part(dec: &SectorDecomposition, m: &GamblerModel) -> Result<TwoPartSchedule> {
    if m.n() != dec.n {
        return Err(Error::Incompatible(format!(
            "gambler over {} vertices, decomposition over {}",
            m.n(),
            dec.n
        )));
    }
    let (n, k) = (dec.n as u64, dec.k as u64);
    let q = (2 * n + k).div_ceil(k) as usize;
    let round = 2 * q;
    let period = lcm(round, m.period());
    if period > MAX_PERIOD {
        return Err(Error::InvalidParams(format!(
            "expanded schedule period {period} exceeds {MAX_PERIOD}"
        )));
    }
    let rounds = period / round;

    // Pick per-round targets: per sector, the highest average probability
    // over the round's second part; conflicts go to the lower sector index.
    let mut targets: Vec<Vec<Vertex>> = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let mut claimed: BTreeSet<Vertex> = BTreeSet::new();
        let mut round_targets = Vec::with_capacity(dec.sectors.len());
        for sector in &dec.sectors {
            let avg = |&v: &Vertex| -> f64 {
                (1..=q)
                    .map(|j| m.distribution_at((r * round + q + j) as u64).probs()[v])
                    .sum::<f64>()
            };
            let mut order: Vec<Vertex> = sector.vertices.iter().copied().collect();
            order.sort_by(|a, b| avg(b).total_cmp(&avg(a)).then(a.cmp(b)));
            // Every sector vertex can be claimed only when the sector is a
            // subset of earlier shared vertices; fall back to its best.
            let pick = order.iter().copied().find(|v| !claimed.contains(v)).unwrap_or(order[0]);
            claimed.insert(pick);
            round_targets.push(pick);
        }
        targets.push(round_targets);
    }

    // Expand the walk-then-sit rounds, starting each round at the previous
    // round's target so the block tiles seamlessly.
    let mut block: Vec<Vec<Vertex>> = vec![Vec::with_capacity(period); dec.k];
    for (c, col) in block.iter_mut().enumerate() {
        let sector = dec.cop_sector[c];
        for r in 0..rounds {
            let from = targets[(r + rounds - 1) % rounds][sector];
            let to = targets[r][sector];
            let path = dec.sectors[sector].tree.path_between(from, to);
            debug_assert!(path.len() <= q, "tree path must fit in one part");
            for j in 1..=q {
                col.push(if j < path.len() { path[j] } else { to });
            }
            col.extend(std::iter::repeat_n(to, q));
        }
    }
    Ok(TwoPartSchedule {
        schedule: CopSchedule::deterministic(Vec::new(), block),
        part_len: q,
        targets,
    })
}

/// A diameter-round chase schedule against a known periodic gambler.
#[derive(Debug)]
pub struct ChaseSchedule {
    pub schedule: CopSchedule,
    pub diameter: usize,
    /// `targets[r][j]` = the `j`-th target of round `r` (round 0 is the
    /// lead-in round; later rounds repeat cyclically).
    pub targets: Vec<Vec<Vertex>>,
}

/// Cops start on the `k` most probable vertices of turn 1. Then, in rounds
/// of `d = diameter(g)` turns, every cop walks a shortest path to its slot
/// among the `k` most probable vertices of the round's final turn and sits
/// once it arrives. Round `i` covers turns `d*i + 2 ..= d*(i+1) + 1`, so a
/// cop always has `d` moves available.
pub fn diameter_chase(g: &Graph, m: &GamblerModel, k: usize) -> Result<ChaseSchedule> {
    if m.n() != g.n() {
        return Err(Error::Incompatible(format!(
            "gambler over {} vertices, graph over {}",
            m.n(),
            g.n()
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let d = g.diameter()?;
    let assign = |tops: Vec<Vertex>| -> Vec<Vertex> {
        (0..k).map(|c| tops[c % tops.len()]).collect()
    };
    let init = assign(m.distribution_at(1).top_k(k));
    if d == 0 {
        // Single-vertex graph: sit.
        return Ok(ChaseSchedule {
            schedule: CopSchedule::deterministic(vec![init.clone()], vec![vec![0]; k]),
            diameter: 0,
            targets: vec![init],
        });
    }

    let p = m.period();
    let rounds = p / crate::num::gcd(d, p);
    if d * rounds > MAX_PERIOD {
        return Err(Error::InvalidParams(format!(
            "expanded schedule period {} exceeds {MAX_PERIOD}",
            d * rounds
        )));
    }
    // targets[r] for rounds 0 ..= rounds; round `rounds` wraps to round 0's
    // phase and anchors the cyclic block.
    let round_targets: Vec<Vec<Vertex>> = (0..=rounds)
        .map(|r| assign(m.distribution_at((d * (r + 1) + 1) as u64).top_k(k)))
        .collect();
    debug_assert_eq!(round_targets[rounds], round_targets[0], "phase wrap mismatch");

    let walk = |rows: &mut Vec<Vec<Vertex>>, from: &[Vertex], to: &[Vertex]| -> Result<()> {
        for c in 0..k {
            let path = g.shortest_path(from[c], to[c])?;
            debug_assert!(path.len() <= d + 1, "shortest path exceeds diameter");
            for j in 1..=d {
                rows[c].push(if j < path.len() { path[j] } else { to[c] });
            }
        }
        Ok(())
    };

    // Lead-in: turn 1 on the initial tops, then round 0's approach walk.
    let mut head: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); k];
    walk(&mut head, &init, &round_targets[0])?;
    let mut prefix = vec![init];
    prefix.extend((0..d).map(|t| (0..k).map(|c| head[c][t]).collect::<Vec<_>>()));

    // Cyclic block: rounds 1 ..= rounds, each walking from the previous
    // round's targets.
    let mut block: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d * rounds); k];
    for r in 1..=rounds {
        let from = round_targets[r - 1].clone();
        walk(&mut block, &from, &round_targets[r])?;
    }
    Ok(ChaseSchedule {
        schedule: CopSchedule::deterministic(prefix, block),
        diameter: d,
        targets: round_targets[..rounds].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gambler::random_distribution;
    use crate::graph::{generate, GraphKind};
    use crate::sector::decompose;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn top_k_sit_picks_most_probable() {
        let d = Distribution::new(vec![0.5, 0.3, 0.2]).unwrap();
        let s = top_k_sit(&d, 2);
        assert_eq!(s.initial_positions(), vec![0, 1]);
        assert_eq!(s.round_len, 1);
        let u = Distribution::uniform(10);
        assert_eq!(top_k_sit(&u, 3).initial_positions(), vec![0, 1, 2]);
    }

    #[test]
    fn top_k_sit_with_surplus_cops_covers_everything() {
        let d = Distribution::new(vec![0.6, 0.4]).unwrap();
        let s = top_k_sit(&d, 5);
        assert_eq!(s.initial_positions(), vec![0, 1, 0, 1, 0]);
        let occ = &s.occupied_sets(0)[0];
        assert_eq!(occ.iter().copied().collect::<Vec<_>>(), vec![0, 1]);
        let g = generate(GraphKind::Path, 2, None, 0).unwrap();
        s.validate(&g).unwrap();
    }

    #[test]
    fn walk_then_sit_traces_the_path() {
        let s = walk_then_sit(&[0, 1, 2, 3]);
        assert_eq!(s.prefix.len(), 4);
        assert_eq!(s.initial_positions(), vec![0]);
        assert_eq!(s.occupied_sets(0)[0].iter().copied().collect::<Vec<_>>(), vec![3]);
        let g = generate(GraphKind::Path, 4, None, 0).unwrap();
        s.validate(&g).unwrap();
    }

    #[test]
    fn dfs_patrol_single_sector_is_the_tour() {
        let g = generate(GraphKind::Path, 3, None, 0).unwrap();
        let dec = decompose(&g, 1).unwrap();
        let s = dfs_patrol(&dec);
        assert_eq!(s.round_len, 6);
        assert_eq!(s.alternative_count(), 2);
        let fwd: Vec<Vec<Vertex>> = s.occupied_sets(0).iter().map(|s| s.iter().copied().collect()).collect();
        assert_eq!(fwd, vec![vec![0], vec![1], vec![2], vec![2], vec![1], vec![0]]);
        let bwd: Vec<Vec<Vertex>> = s.occupied_sets(1).iter().map(|s| s.iter().copied().collect()).collect();
        assert_eq!(bwd, vec![vec![0], vec![1], vec![2], vec![2], vec![1], vec![0]]);
        s.validate(&g).unwrap();
    }

    #[test]
    fn dfs_patrol_pads_short_sectors() {
        let g = generate(GraphKind::Star, 5, None, 0).unwrap();
        let dec = decompose(&g, 2).unwrap();
        let s = dfs_patrol(&dec);
        // Sector 0 tour over {0,1,2,3} has 10 entries; sector 1 tour
        // [0,4,4,0] is padded by sitting at the shared root.
        assert_eq!(s.round_len, 10);
        assert_eq!(s.groups[0].alternatives[0].positions[0], vec![0, 1, 1, 0, 2, 2, 0, 3, 3, 0]);
        assert_eq!(
            s.groups[1].alternatives[0].positions[0],
            vec![0, 4, 4, 0, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(
            s.groups[1].alternatives[1].positions[0],
            vec![0, 4, 4, 0, 0, 0, 0, 0, 0, 0]
        );
        s.validate(&g).unwrap();
    }

    #[test]
    fn dfs_patrol_covers_each_sector_twice_per_round() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for case in 0..40 {
            let n = rng.gen_range(3..=60);
            let k = rng.gen_range(1..n);
            let g = if case % 2 == 0 {
                generate(GraphKind::RandomTree, n, None, rng.gen()).unwrap()
            } else {
                generate(GraphKind::ConnectedGnp, n, Some(0.07), rng.gen()).unwrap()
            };
            let dec = decompose(&g, k).unwrap();
            let s = dfs_patrol(&dec);
            s.validate(&g).unwrap();
            for (i, sector) in dec.sectors.iter().enumerate() {
                for alt in &s.groups[i].alternatives {
                    let row = &alt.positions[0];
                    for &v in &sector.vertices {
                        let visits = row.iter().filter(|&&w| w == v).count();
                        assert!(visits >= 2, "vertex {v} of sector {i} visited {visits} times");
                    }
                }
            }
            assert!(s.round_len <= 3 * dec.max_sector_size() - 2);
        }
    }

    #[test]
    fn two_part_targets_on_static_star() {
        let g = generate(GraphKind::Star, 5, None, 0).unwrap();
        let dec = decompose(&g, 2).unwrap();
        let m = GamblerModel::make_static(vec![0.2; 5]).unwrap();
        let tp = changing_two_part(&dec, &m).unwrap();
        assert_eq!(tp.part_len, 6);
        assert_eq!(tp.schedule.round_len, 12);
        // Uniform averages tie everywhere; sector 0 takes the center,
        // sector 1 must fall back to its leaf.
        assert_eq!(tp.targets, vec![vec![0, 4]]);
        tp.schedule.validate(&g).unwrap();
    }

    #[test]
    fn two_part_chases_the_alternating_mass() {
        let g = generate(GraphKind::Path, 2, None, 0).unwrap();
        let dec = decompose(&g, 1).unwrap();
        let m = GamblerModel::make_changing(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let tp = changing_two_part(&dec, &m).unwrap();
        // Part length 5: the second part covers turns 6..=10, hitting
        // vertex 1 on the three odd phases.
        assert_eq!(tp.part_len, 5);
        assert_eq!(tp.targets, vec![vec![1]]);
        assert!(tp.schedule.groups[0].alternatives[0].positions[0].iter().all(|&v| v == 1));
        tp.schedule.validate(&g).unwrap();
    }

    #[test]
    fn two_part_sits_through_every_second_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in 0..30 {
            let n = rng.gen_range(2..=40);
            let k = rng.gen_range(1..n);
            let g = generate(GraphKind::RandomTree, n, None, rng.gen()).unwrap();
            let dec = decompose(&g, k).unwrap();
            let period = [1, 2, 5][case % 3];
            let phases: Vec<Vec<f64>> = (0..period)
                .map(|i| random_distribution(n, rng.gen::<u64>() ^ i as u64).probs().to_vec())
                .collect();
            let m = GamblerModel::make_changing(phases).unwrap();
            let tp = changing_two_part(&dec, &m).unwrap();
            tp.schedule.validate(&g).unwrap();
            let q = tp.part_len;
            let rounds = tp.schedule.round_len / (2 * q);
            for (r, round_targets) in tp.targets.iter().enumerate() {
                for (i, &t) in round_targets.iter().enumerate() {
                    assert!(dec.sectors[i].vertices.contains(&t), "target outside sector {i}");
                }
                for c in 0..k {
                    let row = &tp.schedule.groups[0].alternatives[0].positions[c];
                    let target = round_targets[dec.cop_sector[c]];
                    for j in 0..q {
                        assert_eq!(row[r * 2 * q + q + j], target, "cop {c} moved in part 2");
                    }
                }
                assert!(rounds >= 1);
            }
        }
    }

    #[test]
    fn chase_sits_on_targets_at_round_ends() {
        let g = generate(GraphKind::Star, 6, None, 0).unwrap();
        let m = GamblerModel::make_static(vec![0.05, 0.4, 0.3, 0.1, 0.1, 0.05]).unwrap();
        let chase = diameter_chase(&g, &m, 2).unwrap();
        assert_eq!(chase.diameter, 2);
        assert_eq!(chase.schedule.prefix.len(), 3);
        // Static gambler: every round targets the two most probable
        // vertices, and cops start there on turn 1 already.
        assert_eq!(chase.targets, vec![vec![1, 2]]);
        assert_eq!(chase.schedule.initial_positions(), vec![1, 2]);
        let block = &chase.schedule.groups[0].alternatives[0].positions;
        assert!(block[0].iter().all(|&v| v == 1));
        assert!(block[1].iter().all(|&v| v == 2));
        chase.schedule.validate(&g).unwrap();
    }

    #[test]
    fn chase_walks_between_alternating_tops() {
        // Period-2 mass flips between the two far leaves of a path.
        let g = generate(GraphKind::Path, 5, None, 0).unwrap();
        let m = GamblerModel::make_changing(vec![
            vec![0.9, 0.0, 0.0, 0.0, 0.1],
            vec![0.1, 0.0, 0.0, 0.0, 0.9],
        ])
        .unwrap();
        let chase = diameter_chase(&g, &m, 1).unwrap();
        let d = chase.diameter;
        assert_eq!(d, 4);
        // Rounds end on turns d(i+1)+1 = 5, 9, ...; phase of turn 5 is 0
        // (mass on vertex 0), phase of turn 9 is 0 as well since d is a
        // multiple of the period.
        assert_eq!(chase.targets.len(), 1);
        assert_eq!(chase.targets[0], vec![0]);
        assert_eq!(chase.schedule.initial_positions(), vec![0]);
        chase.schedule.validate(&g).unwrap();

        // An odd diameter forces genuine walking: on a four-path (d = 3)
        // the round-end phases alternate, so the cop shuttles between the
        // endpoints.
        let g = generate(GraphKind::Path, 4, None, 0).unwrap();
        let m = GamblerModel::make_changing(vec![
            vec![0.9, 0.0, 0.0, 0.1],
            vec![0.1, 0.0, 0.0, 0.9],
        ])
        .unwrap();
        let chase = diameter_chase(&g, &m, 1).unwrap();
        assert_eq!(chase.diameter, 3);
        assert_eq!(chase.targets.len(), 2);
        // Turn d+1 = 4 has phase 1 (mass on 3); turn 2d+1 = 7 has phase 0.
        assert_eq!(chase.targets[0], vec![3]);
        assert_eq!(chase.targets[1], vec![0]);
        let block = &chase.schedule.groups[0].alternatives[0].positions[0];
        assert_eq!(block, &vec![2, 1, 0, 1, 2, 3]);
        chase.schedule.validate(&g).unwrap();
    }

    #[test]
    fn chase_final_turns_occupy_exactly_the_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for case in 0..30 {
            let n = rng.gen_range(2..=30);
            let k = rng.gen_range(1..=n);
            let g = if case % 2 == 0 {
                generate(GraphKind::Star, n.max(2), None, 0).unwrap()
            } else {
                generate(GraphKind::ConnectedGnp, n.max(3), Some(0.4), rng.gen()).unwrap()
            };
            let period = [1, 2, 3][case % 3];
            let phases: Vec<Vec<f64>> = (0..period)
                .map(|i| random_distribution(g.n(), rng.gen::<u64>() ^ i as u64).probs().to_vec())
                .collect();
            let m = GamblerModel::make_changing(phases).unwrap();
            let chase = diameter_chase(&g, &m, k).unwrap();
            chase.schedule.validate(&g).unwrap();
            let d = chase.diameter;
            let block = &chase.schedule.groups[0].alternatives[0].positions;
            let rounds = chase.targets.len();
            // Round r >= 1 ends at block column r*d - 1; its targets are
            // chase.targets[r % rounds].
            for r in 1..=rounds {
                let col = r * d - 1;
                let want: BTreeSet<Vertex> = chase.targets[r % rounds].iter().copied().collect();
                let got: BTreeSet<Vertex> = (0..k).map(|c| block[c][col]).collect();
                assert_eq!(got, want, "round {r} final occupancy");
            }
            // The lead-in round ends on the round-0 targets.
            let last_prefix: BTreeSet<Vertex> = chase.schedule.prefix.last().unwrap().iter().copied().collect();
            let want: BTreeSet<Vertex> = chase.targets[0].iter().copied().collect();
            assert_eq!(last_prefix, want);
        }
    }

    #[test]
    fn top_k_sit_matches_brute_force_best_subset() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let n = rng.gen_range(2..=12);
            let k = rng.gen_range(1..=n);
            let d = random_distribution(n, rng.gen());
            let chosen = d.top_k(k);
            let chosen_mass: f64 = d.mass_on(chosen.iter());
            // Exhaustive maximum over all k-subsets.
            let mut best = 0.0f64;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize == k {
                    let mass: f64 = (0..n).filter(|&v| mask & (1 << v) != 0).map(|v| d.probs()[v]).sum();
                    best = best.max(mass);
                }
            }
            assert!((chosen_mass - best).abs() < 1e-12, "n={n} k={k}");
        }
    }

    #[test]
    fn validate_rejects_broken_schedules() {
        let g = generate(GraphKind::Path, 4, None, 0).unwrap();
        // Teleporting within a round.
        let s = CopSchedule::deterministic(Vec::new(), vec![vec![0, 2]]);
        assert!(s.validate(&g).is_err());
        // Round wrap-around teleport: ends at 3, restarts at 0.
        let s = CopSchedule::deterministic(Vec::new(), vec![vec![0, 1, 2, 3]]);
        assert!(s.validate(&g).is_err());
        // Sitting forever anywhere is fine.
        let s = CopSchedule::deterministic(Vec::new(), vec![vec![2]]);
        s.validate(&g).unwrap();
        // Prefix must chain into the round.
        let s = CopSchedule::deterministic(vec![vec![0]], vec![vec![3]]);
        assert!(s.validate(&g).is_err());
        // Weights must sum to 1.
        let mut s = CopSchedule::deterministic(Vec::new(), vec![vec![2]]);
        s.groups[0].alternatives[0].weight = 0.7;
        assert!(s.validate(&g).is_err());
    }

    #[test]
    fn schedule_json_golden() {
        let g = generate(GraphKind::Path, 3, None, 0).unwrap();
        let dec = decompose(&g, 1).unwrap();
        let s = dfs_patrol(&dec);
        let v: serde_json::Value = serde_json::from_str(&s.to_json_string()).unwrap();
        assert_eq!(v["cop_count"], 1);
        assert_eq!(v["round_len"], 6);
        assert_eq!(v["initial_positions"], serde_json::json!([0]));
        assert_eq!(
            v["groups"][0]["alternatives"][0]["positions"],
            serde_json::json!([[0, 1, 2, 2, 1, 0]])
        );
        assert_eq!(v["groups"][0]["alternatives"][1]["weight"], 0.5);
    }
}
