//! Partitioning a spanning tree into connected sectors of bounded size.
//!
//! # Overview
//!
//! For a connected graph on `n` vertices patrolled by `k < n` cops, the
//! spanning tree is split into at most `k` connected sectors, each of at
//! most `2n/k + 1` vertices. Consecutive sectors overlap in a single
//! *shared* vertex, so the sector vertex sets cover the tree while pairwise
//! intersections contain only shared vertices.
//!
//! Sectors are peeled off one at a time. A peel takes the subtree hanging
//! under the current root's heaviest branch when that branch is small
//! enough, accumulates sibling branches when all are small, and otherwise
//! descends into the heavy branch. Descending re-anchors at the vertex
//! adjacent to the removed context, which keeps both the sector and the
//! remainder connected; every peel re-checks this.
//!
//! # Size threshold
//!
//! The bound `x = n/k + 1` is a rational, so sizes are compared in exact
//! integer arithmetic: `|S| > x` is `k |S| > n + k` and `|S| <= 2x - 1` is
//! `k |S| <= 2n + k`. No floating point is involved in any size decision.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::{spanning_tree, RootedTree};

/// The rational size threshold `x = num/den`, compared exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    pub fn new(num: u64, den: u64) -> Threshold {
        assert!(den > 0, "threshold denominator must be positive");
        Threshold { num, den }
    }

    /// `x = (n + k) / k`, the peel threshold for `n` vertices and `k` cops.
    pub fn for_game(n: usize, k: usize) -> Threshold {
        Threshold::new((n + k) as u64, k as u64)
    }

    /// `size > x`, exactly.
    pub fn exceeded_by(&self, size: usize) -> bool {
        (size as u128) * (self.den as u128) > self.num as u128
    }

    /// `size <= 2x - 1`, exactly.
    pub fn within_double(&self, size: usize) -> bool {
        (size as u128) * (self.den as u128) <= 2 * (self.num as u128) - self.den as u128
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// One connected sector of the decomposition.
#[derive(Debug, Clone)]
pub struct Sector {
    /// Sector vertex set.
    pub vertices: BTreeSet<Vertex>,
    /// The vertex this sector shares with the rest of the tree.
    pub shared: Vertex,
    /// Spanning subtree of the sector, rooted at the shared vertex.
    pub tree: RootedTree,
}

#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub n: usize,
    pub k: usize,
    pub sectors: Vec<Sector>,
    /// `cop_sector[c]` is the sector index cop `c` patrols.
    pub cop_sector: Vec<usize>,
}

/// Result of peeling one sector off a tree.
#[derive(Debug, Clone)]
pub struct Peel {
    pub sector: BTreeSet<Vertex>,
    pub shared: Vertex,
    pub sector_tree: RootedTree,
    pub remainder: RootedTree,
}

// ----------------------------------------------------------------------
// Branch machinery
// ----------------------------------------------------------------------

/// A live view of a connected subset of `tree`'s vertices.
struct View<'a> {
    tree: &'a RootedTree,
    verts: BTreeSet<Vertex>,
    root: Vertex,
}

impl View<'_> {
    fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.tree
            .tree_neighbors(v)
            .into_iter()
            .filter(|w| self.verts.contains(w))
            .collect()
    }

    /// Connected components of the view minus `u`, each excluding `u`,
    /// ordered by descending size with ties by lowest contained vertex.
    fn branch_components(&self, u: Vertex) -> Vec<BTreeSet<Vertex>> {
        let mut comps: Vec<BTreeSet<Vertex>> = Vec::new();
        let mut assigned: BTreeSet<Vertex> = BTreeSet::new();
        for w in self.neighbors(u) {
            if assigned.contains(&w) {
                continue;
            }
            let mut comp = BTreeSet::from([w]);
            let mut queue = VecDeque::from([w]);
            while let Some(v) = queue.pop_front() {
                for x in self.neighbors(v) {
                    if x != u && comp.insert(x) {
                        queue.push_back(x);
                    }
                }
            }
            assigned.extend(comp.iter().copied());
            comps.push(comp);
        }
        comps.sort_by(|a, b| {
            b.len()
                .cmp(&a.len())
                .then_with(|| a.iter().next().cmp(&b.iter().next()))
        });
        comps
    }
}

/// The heaviest branch at `u`: among the components `C` of `t - u`, returns
/// `{u} ∪ C` for the `C` with the most vertices, breaking ties toward the
/// component containing the lowest-index vertex. `u` must be in the tree.
pub fn largest_branch(t: &RootedTree, u: Vertex) -> BTreeSet<Vertex> {
    let view = View {
        tree: t,
        verts: t.vertices().collect(),
        root: t.root(),
    };
    let mut comps = view.branch_components(u);
    let mut branch = if comps.is_empty() { BTreeSet::new() } else { comps.swap_remove(0) };
    branch.insert(u);
    branch
}

/// Splits off one sector `S` with `x < |S| <= 2x - 1` from a tree with more
/// than `x` vertices. Returns the sector, its shared vertex `v` (the single
/// vertex left behind to reconnect the remainder), the sector's subtree
/// rooted at `v`, and the remainder tree on `(V - S) ∪ {v}`. Both sides are
/// verified connected and the size bounds are verified exactly.
pub fn peel_sector(t: &RootedTree, x: Threshold) -> Result<Peel> {
    if !x.exceeded_by(t.len()) {
        return Err(Error::SectorInvariant(format!(
            "peel requires more than x = {} vertices, got {}",
            x.value(),
            t.len()
        )));
    }
    let mut view = View {
        tree: t,
        verts: t.vertices().collect(),
        root: t.root(),
    };
    let mut descended = false;
    loop {
        let m = view.verts.len();
        if descended && x.within_double(m) {
            // The descended subtree fits; take all of it. Anchoring at its
            // root (the vertex adjacent to the removed context) keeps the
            // global remainder connected.
            debug_assert!(x.exceeded_by(m));
            return finish_peel(t, x, view.verts, view.root);
        }
        let u = view.root;
        let comps = view.branch_components(u);
        debug_assert!(!comps.is_empty(), "tree with more than x >= 1 vertices has branches");
        let heavy = &comps[0];
        let branch_size = heavy.len() + 1;
        if !x.within_double(branch_size) {
            // Heavy branch is still too big: descend into it, re-rooted at
            // its vertex adjacent to u.
            let w = *heavy
                .iter()
                .find(|&&v| view.neighbors(u).contains(&v))
                .expect("branch component touches u");
            view.verts = comps.into_iter().next().unwrap();
            view.root = w;
            descended = true;
            continue;
        }
        if x.exceeded_by(branch_size) {
            // x < |{u} ∪ C| <= 2x - 1: the heavy branch is a sector.
            let mut sector = comps.into_iter().next().unwrap();
            sector.insert(u);
            return finish_peel(t, x, sector, u);
        }
        // All branches are small: accumulate them (largest first) until the
        // running union passes x. It cannot overshoot 2x - 1 because each
        // component adds at most x - 1 vertices.
        let mut acc = BTreeSet::from([u]);
        for comp in comps {
            acc.extend(comp);
            if x.exceeded_by(acc.len()) {
                return finish_peel(t, x, acc, u);
            }
        }
        unreachable!("accumulation exhausts a tree larger than x without passing x");
    }
}

fn finish_peel(t: &RootedTree, x: Threshold, sector: BTreeSet<Vertex>, shared: Vertex) -> Result<Peel> {
    if !(x.exceeded_by(sector.len()) && x.within_double(sector.len())) {
        return Err(Error::SectorInvariant(format!(
            "sector size {} outside (x, 2x-1] for x = {}",
            sector.len(),
            x.value()
        )));
    }
    let sector_tree = t
        .induced(&sector, shared)
        .map_err(|_| Error::SectorInvariant("peeled sector is not connected".into()))?;
    let mut rest: BTreeSet<Vertex> = t.vertices().filter(|v| !sector.contains(v)).collect();
    rest.insert(shared);
    debug_assert!(rest.contains(&t.root()), "peel must leave the original root behind");
    let remainder = t
        .induced(&rest, t.root())
        .map_err(|_| Error::SectorInvariant("peel remainder is not connected".into()))?;
    Ok(Peel {
        sector,
        shared,
        sector_tree,
        remainder,
    })
}

// ----------------------------------------------------------------------
// Decomposition
// ----------------------------------------------------------------------

/// Decomposes `g`'s BFS spanning tree (rooted at 0) into at most `k`
/// connected sectors of at most `2n/k + 1` vertices each, and assigns the
/// `k` cops to sectors round-robin. Requires `1 <= k < n`.
pub fn decompose(g: &Graph, k: usize) -> Result<SectorDecomposition> {
    let n = g.n();
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if n <= k {
        return Err(Error::TooManyCops { n, k });
    }
    let x = Threshold::for_game(n, k);
    let mut cur = spanning_tree(g, 0)?;
    let mut sectors: Vec<Sector> = Vec::new();
    while x.exceeded_by(cur.len()) {
        let peel = peel_sector(&cur, x)?;
        sectors.push(Sector {
            vertices: peel.sector,
            shared: peel.shared,
            tree: peel.sector_tree,
        });
        cur = peel.remainder;
    }
    sectors.push(Sector {
        vertices: cur.vertices().collect(),
        shared: cur.root(),
        tree: cur,
    });

    verify_decomposition(n, k, x, &sectors)?;
    let cop_sector = (0..k).map(|c| c % sectors.len()).collect();
    Ok(SectorDecomposition {
        n,
        k,
        sectors,
        cop_sector,
    })
}

fn verify_decomposition(n: usize, k: usize, x: Threshold, sectors: &[Sector]) -> Result<()> {
    if sectors.len() > k {
        return Err(Error::SectorInvariant(format!(
            "{} sectors exceed {} cops",
            sectors.len(),
            k
        )));
    }
    let mut union: BTreeSet<Vertex> = BTreeSet::new();
    let shared: BTreeSet<Vertex> = sectors.iter().map(|s| s.shared).collect();
    for s in sectors {
        if !x.within_double(s.vertices.len()) {
            return Err(Error::SectorInvariant(format!(
                "sector of {} vertices exceeds 2x-1 for x = {}",
                s.vertices.len(),
                x.value()
            )));
        }
        if !s.vertices.contains(&s.shared) || s.tree.root() != s.shared {
            return Err(Error::SectorInvariant("sector tree must be rooted at its shared vertex".into()));
        }
        for prev in union.intersection(&s.vertices) {
            if !shared.contains(prev) {
                return Err(Error::SectorInvariant(format!(
                    "sectors overlap at non-shared vertex {prev}"
                )));
            }
        }
        union.extend(s.vertices.iter().copied());
    }
    if union.len() != n {
        return Err(Error::SectorInvariant("sectors do not cover the graph".into()));
    }
    Ok(())
}

impl SectorDecomposition {
    /// Cop indices assigned to sector `i`, ascending.
    pub fn cops_of_sector(&self, i: usize) -> Vec<usize> {
        (0..self.k).filter(|&c| self.cop_sector[c] == i).collect()
    }

    pub fn max_sector_size(&self) -> usize {
        self.sectors.iter().map(|s| s.vertices.len()).max().unwrap_or(0)
    }

    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct SectorDto {
            vertices: Vec<Vertex>,
            shared: Vertex,
            tree_edges: Vec<(Vertex, Vertex)>,
        }
        #[derive(Serialize)]
        struct Dto<'a> {
            n: usize,
            k: usize,
            sectors: Vec<SectorDto>,
            cop_assignment: &'a [usize],
        }
        let dto = Dto {
            n: self.n,
            k: self.k,
            sectors: self
                .sectors
                .iter()
                .map(|s| {
                    let mut tree_edges: Vec<_> = s.tree.edges().collect();
                    tree_edges.sort_unstable();
                    SectorDto {
                        vertices: s.vertices.iter().copied().collect(),
                        shared: s.shared,
                        tree_edges,
                    }
                })
                .collect(),
            cop_assignment: &self.cop_sector,
        };
        serde_json::to_string_pretty(&dto).expect("decomposition serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tree_of(kind: GraphKind, n: usize, seed: u64) -> RootedTree {
        let g = generate(kind, n, None, seed).unwrap();
        spanning_tree(&g, 0).unwrap()
    }

    #[test]
    fn threshold_comparisons_are_exact() {
        // x = 13/3: 4 < x < 5, 2x - 1 = 23/3 between 7 and 8.
        let x = Threshold::for_game(10, 3);
        assert!(!x.exceeded_by(4));
        assert!(x.exceeded_by(5));
        assert!(x.within_double(7));
        assert!(!x.within_double(8));
        // Integer x = 4 (n = 6, k = 2): the boundary |S| = x must not count
        // as exceeding, and |S| = 2x - 1 = 7 must still be allowed.
        let x = Threshold::for_game(6, 2);
        assert!(!x.exceeded_by(4));
        assert!(x.exceeded_by(5));
        assert!(x.within_double(7));
        assert!(!x.within_double(8));
    }

    #[test]
    fn largest_branch_examples() {
        let t = tree_of(GraphKind::Path, 5, 0);
        // At the midpoint both branches have two vertices; the tie goes to
        // the side containing vertex 0.
        assert_eq!(largest_branch(&t, 2), [0, 1, 2].into_iter().collect());
        assert_eq!(largest_branch(&t, 0), (0..5).collect());
        let star = tree_of(GraphKind::Star, 6, 0);
        assert_eq!(largest_branch(&star, 0), [0, 1].into_iter().collect());
    }

    #[test]
    fn peel_walks_down_a_path() {
        let t = tree_of(GraphKind::Path, 7, 0);
        let peel = peel_sector(&t, Threshold::new(2, 1)).unwrap();
        assert_eq!(peel.sector, [4, 5, 6].into_iter().collect());
        assert_eq!(peel.shared, 4);
        assert_eq!(peel.sector_tree.root(), 4);
        let rem: Vec<_> = peel.remainder.vertices().collect();
        assert_eq!(rem, vec![0, 1, 2, 3, 4]);
        assert_eq!(peel.remainder.root(), 0);
    }

    #[test]
    fn peel_accumulates_star_branches() {
        let t = tree_of(GraphKind::Star, 5, 0);
        let peel = peel_sector(&t, Threshold::new(7, 2)).unwrap();
        assert_eq!(peel.sector, [0, 1, 2, 3].into_iter().collect());
        assert_eq!(peel.shared, 0);
        let rem: Vec<_> = peel.remainder.vertices().collect();
        assert_eq!(rem, vec![0, 4]);
    }

    #[test]
    fn peel_rejects_small_trees() {
        let t = tree_of(GraphKind::Path, 3, 0);
        assert!(peel_sector(&t, Threshold::new(4, 1)).is_err());
    }

    /// Regression: descending into a heavy branch must re-anchor at the
    /// vertex adjacent to the removed context. On this tree, peeling with
    /// the lowest-index vertex as the split point instead would disconnect
    /// the remainder `{0} ∪ {split}`.
    #[test]
    fn peel_keeps_remainder_connected_across_descents() {
        let g = Graph::new(6, &[(0, 2), (2, 1), (2, 3), (1, 4), (4, 5)]).unwrap();
        let t = spanning_tree(&g, 0).unwrap();
        let peel = peel_sector(&t, Threshold::new(2, 1)).unwrap();
        assert_eq!(peel.sector, [1, 4, 5].into_iter().collect());
        assert_eq!(peel.shared, 1);
        let rem: Vec<_> = peel.remainder.vertices().collect();
        assert_eq!(rem, vec![0, 1, 2, 3]);
    }

    #[test]
    fn decompose_star_five_two_cops() {
        let g = generate(GraphKind::Star, 5, None, 0).unwrap();
        let d = decompose(&g, 2).unwrap();
        assert_eq!(d.sectors.len(), 2);
        assert_eq!(d.sectors[0].vertices, [0, 1, 2, 3].into_iter().collect());
        assert_eq!(d.sectors[0].shared, 0);
        assert_eq!(d.sectors[1].vertices, [0, 4].into_iter().collect());
        assert_eq!(d.sectors[1].shared, 0);
        assert_eq!(d.cop_sector, vec![0, 1]);
    }

    #[test]
    fn decompose_path_ten_three_cops() {
        let g = generate(GraphKind::Path, 10, None, 0).unwrap();
        let d = decompose(&g, 3).unwrap();
        let sizes: Vec<_> = d.sectors.iter().map(|s| s.vertices.len()).collect();
        assert_eq!(sizes, vec![7, 4]);
        assert_eq!(d.sectors[0].vertices, (3..10).collect());
        assert_eq!(d.sectors[0].shared, 3);
        assert_eq!(d.sectors[1].vertices, (0..4).collect());
        assert_eq!(d.sectors[1].shared, 0);
        assert_eq!(d.cop_sector, vec![0, 1, 0]);
    }

    #[test]
    fn decompose_single_cop_takes_everything() {
        let g = generate(GraphKind::Grid, 12, None, 0).unwrap();
        let d = decompose(&g, 1).unwrap();
        assert_eq!(d.sectors.len(), 1);
        assert_eq!(d.sectors[0].vertices.len(), 12);
        assert_eq!(d.sectors[0].shared, 0);
    }

    #[test]
    fn decompose_rejects_k_at_least_n() {
        let g = generate(GraphKind::Path, 4, None, 0).unwrap();
        assert!(matches!(decompose(&g, 4), Err(Error::TooManyCops { n: 4, k: 4 })));
        assert!(decompose(&g, 0).is_err());
    }

    #[test]
    fn decomposition_invariants_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for case in 0..120 {
            let n = rng.gen_range(2..=120);
            let k = rng.gen_range(1..n);
            let g = if case % 2 == 0 {
                generate(GraphKind::RandomTree, n, None, rng.gen()).unwrap()
            } else {
                generate(GraphKind::ConnectedGnp, n, Some(0.05), rng.gen()).unwrap()
            };
            let d = decompose(&g, k).unwrap_or_else(|e| panic!("n={n} k={k} case={case}: {e}"));
            // decompose re-verifies cover/overlap/size internally; check the
            // pieces a consumer relies on.
            assert!(d.sectors.len() <= k);
            let x = Threshold::for_game(n, k);
            for s in &d.sectors {
                assert!(x.within_double(s.vertices.len()));
                assert_eq!(s.tree.root(), s.shared);
                assert_eq!(s.tree.len(), s.vertices.len());
                for (p, c) in s.tree.edges() {
                    assert!(g.has_edge(p, c));
                }
            }
            assert_eq!(d.cop_sector.len(), k);
            for i in 0..d.sectors.len() {
                assert!(!d.cops_of_sector(i).is_empty(), "sector {i} has no cop");
            }
        }
    }

    #[test]
    fn json_shape() {
        let g = generate(GraphKind::Star, 5, None, 0).unwrap();
        let d = decompose(&g, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&d.to_json_string()).unwrap();
        assert_eq!(v["n"], 5);
        assert_eq!(v["sectors"][0]["vertices"], serde_json::json!([0, 1, 2, 3]));
        assert_eq!(v["sectors"][1]["shared"], 0);
        assert_eq!(v["cop_assignment"], serde_json::json!([0, 1]));
    }
}
