//! Undirected simple graphs and the generator corpus.
//!
//! Vertices are `0..n`. Adjacency lists are kept sorted ascending so that
//! every traversal in the crate (BFS trees, tours, shortest paths) is
//! deterministic. Random generators draw from a ChaCha stream seeded
//! explicitly; the same seed always yields the same graph.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    /// Builds a simple undirected graph on `n` vertices. Duplicate edges
    /// (in either orientation) are collapsed; self-loops and out-of-range
    /// endpoints are rejected.
    pub fn new(n: usize, edge_list: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, adj, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(min, max)` pairs, sorted ascending.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v`, sorted ascending.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Hop distances from `source` to every vertex. Errors if some vertex
    /// is unreachable.
    pub fn bfs_distances(&self, source: Vertex) -> Result<Vec<usize>> {
        if source >= self.n {
            return Err(Error::VertexOutOfRange { vertex: source, n: self.n });
        }
        let mut dist = vec![usize::MAX; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist.contains(&usize::MAX) {
            return Err(Error::Disconnected);
        }
        Ok(dist)
    }

    /// Maximum over all vertex pairs of the shortest-path length.
    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for v in 0..self.n {
            let dist = self.bfs_distances(v)?;
            best = best.max(dist.into_iter().max().unwrap_or(0));
        }
        Ok(best)
    }

    /// A shortest path from `from` to `to`, inclusive of both endpoints.
    /// Deterministic: at each step the lowest-index viable neighbor is taken.
    pub fn shortest_path(&self, from: Vertex, to: Vertex) -> Result<Vec<Vertex>> {
        let dist = self.bfs_distances(to)?;
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            // Neighbors are sorted, so `find` picks the lowest index.
            let next = self.adj[cur]
                .iter()
                .copied()
                .find(|&w| dist[w] + 1 == dist[cur])
                .expect("BFS distance field must decrease toward the target");
            path.push(next);
            cur = next;
        }
        Ok(path)
    }

    // ------------------------------------------------------------------
    // Text formats
    // ------------------------------------------------------------------

    /// Plain edge-list format: first line `n`, then one `u v` line per edge.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list_text(text: &str) -> Result<Graph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex count line: {first:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse(format!("bad edge line: {line:?}")));
            };
            let u = a.parse().map_err(|_| Error::Parse(format!("bad endpoint: {a:?}")))?;
            let v = b.parse().map_err(|_| Error::Parse(format!("bad endpoint: {b:?}")))?;
            edges.push((u, v));
        }
        Graph::new(n, &edges)
    }

    /// Graphviz DOT export.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph g {\n");
        for v in 0..self.n {
            let _ = writeln!(out, "  {v};");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

// ----------------------------------------------------------------------
// Generators
// ----------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Path,
    Cycle,
    Star,
    Grid,
    RandomTree,
    ConnectedGnp,
}

impl GraphKind {
    pub const ALL: [GraphKind; 6] = [
        GraphKind::Path,
        GraphKind::Cycle,
        GraphKind::Star,
        GraphKind::Grid,
        GraphKind::RandomTree,
        GraphKind::ConnectedGnp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Path => "path",
            GraphKind::Cycle => "cycle",
            GraphKind::Star => "star",
            GraphKind::Grid => "grid",
            GraphKind::RandomTree => "random_tree",
            GraphKind::ConnectedGnp => "connected_gnp",
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GraphKind> {
        match s {
            "path" => Ok(GraphKind::Path),
            "cycle" => Ok(GraphKind::Cycle),
            "star" => Ok(GraphKind::Star),
            "grid" => Ok(GraphKind::Grid),
            "random_tree" => Ok(GraphKind::RandomTree),
            "connected_gnp" => Ok(GraphKind::ConnectedGnp),
            other => Err(Error::InvalidParams(format!("unknown graph kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Generates a connected graph of the given kind on `n` vertices.
///
/// `p` is the extra-edge probability for [`GraphKind::ConnectedGnp`] and is
/// ignored (and must be absent) for the other kinds. `seed` only matters for
/// the randomized kinds; equal seeds give equal graphs.
pub fn generate(kind: GraphKind, n: usize, p: Option<f64>, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    if p.is_some() && kind != GraphKind::ConnectedGnp {
        return Err(Error::InvalidParams(format!("kind {kind} does not take p")));
    }
    match kind {
        GraphKind::Path => {
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Graph::new(n, &edges)
        }
        GraphKind::Cycle => {
            let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            if n >= 2 {
                edges.push((n - 1, 0));
            }
            Graph::new(n, &edges)
        }
        GraphKind::Star => {
            let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
            Graph::new(n, &edges)
        }
        GraphKind::Grid => {
            // Near-square grid with exactly n vertices; the last row may be
            // partial. Vertex v sits at row v / cols, column v % cols.
            let cols = (n as f64).sqrt().ceil() as usize;
            let mut edges = Vec::new();
            for v in 0..n {
                if (v + 1) % cols != 0 && v + 1 < n {
                    edges.push((v, v + 1));
                }
                if v + cols < n {
                    edges.push((v, v + cols));
                }
            }
            Graph::new(n, &edges)
        }
        GraphKind::RandomTree => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Graph::new(n, &random_tree_edges(n, &mut rng))
        }
        GraphKind::ConnectedGnp => {
            let p = p.ok_or_else(|| Error::InvalidParams("connected_gnp requires p".into()))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("p = {p} outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // A uniform random spanning tree guarantees connectivity; the
            // G(n, p) layer adds independent extra edges on top.
            let mut edges = random_tree_edges(n, &mut rng);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, &edges)
        }
    }
}

/// Uniform random labelled tree via a Pruefer sequence.
fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    if n <= 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // `ptr` scans for the smallest leaf; `leaf` chases chained removals.
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in &seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        generate(GraphKind::Path, n, None, 0).unwrap()
    }

    /// Floyd-Warshall all-pairs distances, used as an independent check
    /// against the BFS-based implementations.
    fn floyd_warshall(g: &Graph) -> Vec<Vec<usize>> {
        const INF: usize = usize::MAX / 4;
        let n = g.n();
        let mut d = vec![vec![INF; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = 0;
        }
        for &(u, v) in g.edges() {
            d[u][v] = 1;
            d[v][u] = 1;
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][m] + d[m][j]);
                }
            }
        }
        d
    }

    #[test]
    fn build_single_vertex() {
        let g = Graph::new(1, &[]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.is_connected());
    }

    #[test]
    fn build_dedups_and_sorts() {
        let g = Graph::new(4, &[(2, 1), (0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.neighbors(2), &[1, 3]);
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(Graph::new(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn connectivity() {
        assert!(path(3).is_connected());
        assert!(!Graph::new(2, &[]).unwrap().is_connected());
        assert!(generate(GraphKind::Star, 6, None, 0).unwrap().is_connected());
    }

    #[test]
    fn bfs_distances_on_path() {
        assert_eq!(path(5).bfs_distances(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(Graph::new(2, &[]).unwrap().bfs_distances(0).is_err());
    }

    #[test]
    fn grid_corner_eccentricity() {
        let g = generate(GraphKind::Grid, 9, None, 0).unwrap();
        let dist = g.bfs_distances(0).unwrap();
        assert_eq!(dist.iter().copied().max(), Some(4));
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(generate(GraphKind::Star, 8, None, 0).unwrap().diameter().unwrap(), 2);
        assert_eq!(path(7).diameter().unwrap(), 6);
        assert_eq!(generate(GraphKind::Cycle, 6, None, 0).unwrap().diameter().unwrap(), 3);
    }

    #[test]
    fn distances_match_floyd_warshall() {
        let mut graphs = vec![
            path(9),
            generate(GraphKind::Cycle, 8, None, 0).unwrap(),
            generate(GraphKind::Grid, 12, None, 0).unwrap(),
        ];
        for seed in 0..10 {
            graphs.push(generate(GraphKind::RandomTree, 40, None, seed).unwrap());
            graphs.push(generate(GraphKind::ConnectedGnp, 30, Some(0.08), seed).unwrap());
        }
        for g in &graphs {
            let fw = floyd_warshall(g);
            let mut fw_diameter = 0;
            for (v, row) in fw.iter().enumerate() {
                assert_eq!(&g.bfs_distances(v).unwrap(), row);
                fw_diameter = fw_diameter.max(*row.iter().max().unwrap());
            }
            assert_eq!(g.diameter().unwrap(), fw_diameter);
        }
    }

    #[test]
    fn shortest_path_is_shortest_and_deterministic() {
        let g = generate(GraphKind::Cycle, 6, None, 0).unwrap();
        // Distance 3 both ways round; the lowest-index first step wins.
        assert_eq!(g.shortest_path(0, 3).unwrap(), vec![0, 1, 2, 3]);
        let g = generate(GraphKind::Grid, 9, None, 0).unwrap();
        let p = g.shortest_path(0, 8).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p, vec![0, 1, 2, 5, 8]);
        for w in p.windows(2) {
            assert!(g.has_edge(w[0], w[1]));
        }
    }

    #[test]
    fn generator_shapes() {
        assert_eq!(path(10).edge_count(), 9);
        assert_eq!(generate(GraphKind::Cycle, 10, None, 0).unwrap().edge_count(), 10);
        // A two-vertex cycle degenerates to a single edge.
        assert_eq!(generate(GraphKind::Cycle, 2, None, 0).unwrap().edge_count(), 1);
        let star = generate(GraphKind::Star, 6, None, 0).unwrap();
        assert_eq!(star.neighbors(0).len(), 5);
        assert_eq!(star.edge_count(), 5);
        let grid = generate(GraphKind::Grid, 9, None, 0).unwrap();
        assert_eq!(grid.edge_count(), 12);
        assert_eq!(grid.n(), 9);
    }

    #[test]
    fn random_kinds_are_connected_and_deterministic() {
        for seed in 0..20 {
            let t = generate(GraphKind::RandomTree, 50, None, seed).unwrap();
            assert_eq!(t.edge_count(), 49);
            assert!(t.is_connected());
            assert_eq!(t, generate(GraphKind::RandomTree, 50, None, seed).unwrap());

            let g = generate(GraphKind::ConnectedGnp, 30, Some(0.1), seed).unwrap();
            assert!(g.is_connected());
            assert!(g.edge_count() >= 29);
            assert_eq!(g, generate(GraphKind::ConnectedGnp, 30, Some(0.1), seed).unwrap());
        }
        assert_ne!(
            generate(GraphKind::RandomTree, 50, None, 1).unwrap(),
            generate(GraphKind::RandomTree, 50, None, 2).unwrap()
        );
    }

    #[test]
    fn generator_rejects_bad_params() {
        assert!(generate(GraphKind::Path, 0, None, 0).is_err());
        assert!(generate(GraphKind::Path, 5, Some(0.5), 0).is_err());
        assert!(generate(GraphKind::ConnectedGnp, 5, None, 0).is_err());
        assert!(generate(GraphKind::ConnectedGnp, 5, Some(1.5), 0).is_err());
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = generate(GraphKind::ConnectedGnp, 25, Some(0.15), 7).unwrap();
        let text = g.to_edge_list_text();
        assert_eq!(Graph::from_edge_list_text(&text).unwrap(), g);
        assert!(Graph::from_edge_list_text("").is_err());
        assert!(Graph::from_edge_list_text("3\n0 1 2\n").is_err());
        assert!(Graph::from_edge_list_text("3\n0 x\n").is_err());
    }

    #[test]
    fn dot_export() {
        let g = path(3);
        assert_eq!(g.to_dot(), "graph g {\n  0;\n  1;\n  2;\n  0 -- 1;\n  1 -- 2;\n}\n");
    }

    #[test]
    fn kind_names_roundtrip() {
        for kind in GraphKind::ALL {
            assert_eq!(kind.name().parse::<GraphKind>().unwrap(), kind);
        }
        assert!("triangle".parse::<GraphKind>().is_err());
    }
}
