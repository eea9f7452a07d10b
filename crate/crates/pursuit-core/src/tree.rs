//! Rooted trees over graph vertices: deterministic BFS spanning trees,
//! subtree extraction, tree paths, and patrol tours.
//!
//! # Tours
//!
//! [`euler_tour_with_pauses`] walks the tree depth-first from the root,
//! recording every vertex on entry and on each return from a child, then
//! inserts one pause (an immediate repeat) at the first occurrence of every
//! vertex that would otherwise appear only once. The result visits every
//! vertex at least twice, moves along tree edges or stays put between
//! consecutive entries, starts and ends at the root, and has length at most
//! `3 m - 2` for trees on `m >= 2` vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// A rooted tree on a subset of graph vertices. Children lists are sorted
/// ascending, so tours and traversals are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: Vertex,
    parent: BTreeMap<Vertex, Vertex>,
    children: BTreeMap<Vertex, Vec<Vertex>>,
}

impl RootedTree {
    /// Builds a tree from an undirected edge set by BFS from `root`,
    /// visiting neighbors in ascending order. Errors unless the edge set
    /// is exactly a tree spanning its vertices.
    pub fn from_edges(root: Vertex, edges: &[(Vertex, Vertex)]) -> Result<RootedTree> {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        adj.entry(root).or_default();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj.entry(u).or_default().insert(v);
            adj.entry(v).or_default().insert(u);
        }
        let mut tree = RootedTree {
            root,
            parent: BTreeMap::new(),
            children: BTreeMap::new(),
        };
        tree.children.insert(root, Vec::new());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                if w == u || Some(&w) == tree.parent.get(&u) {
                    continue;
                }
                if tree.children.contains_key(&w) {
                    return Err(Error::InvalidParams("edge set contains a cycle".into()));
                }
                tree.parent.insert(w, u);
                tree.children.insert(w, Vec::new());
                tree.children.get_mut(&u).unwrap().push(w);
                queue.push_back(w);
            }
        }
        if tree.len() != adj.len() {
            return Err(Error::Disconnected);
        }
        Ok(tree)
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.children.contains_key(&v)
    }

    /// Vertices in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.children.keys().copied()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent.get(&v).copied()
    }

    /// Children of `v`, sorted ascending.
    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[&v]
    }

    /// Tree edges as `(parent, child)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.parent.iter().map(|(&c, &p)| (p, c))
    }

    /// Parent plus children of `v`, ascending.
    pub fn tree_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.children[&v].clone();
        if let Some(p) = self.parent(v) {
            out.push(p);
        }
        out.sort_unstable();
        out
    }

    /// The unique tree path from `a` to `b`, inclusive.
    pub fn path_between(&self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        let ancestors = |mut v: Vertex| {
            let mut chain = vec![v];
            while let Some(p) = self.parent(v) {
                chain.push(p);
                v = p;
            }
            chain
        };
        let up_a = ancestors(a);
        let up_b = ancestors(b);
        let in_a: BTreeSet<Vertex> = up_a.iter().copied().collect();
        let lca = *up_b.iter().find(|v| in_a.contains(v)).expect("trees share the root");
        let mut path: Vec<Vertex> = up_a.iter().copied().take_while(|&v| v != lca).collect();
        path.push(lca);
        let tail: Vec<Vertex> = up_b.iter().copied().take_while(|&v| v != lca).collect();
        path.extend(tail.into_iter().rev());
        path
    }

    /// The subtree induced on `verts`, re-rooted at `new_root`. Errors if the
    /// induced edge set does not connect all of `verts`.
    pub fn induced(&self, verts: &BTreeSet<Vertex>, new_root: Vertex) -> Result<RootedTree> {
        let edges: Vec<(Vertex, Vertex)> = self
            .edges()
            .filter(|&(p, c)| verts.contains(&p) && verts.contains(&c))
            .collect();
        let tree = RootedTree::from_edges(new_root, &edges)?;
        if tree.len() != verts.len() {
            return Err(Error::Disconnected);
        }
        Ok(tree)
    }
}

/// Deterministic BFS spanning tree of a connected graph, exploring
/// neighbors in ascending index order.
pub fn spanning_tree(g: &Graph, root: Vertex) -> Result<RootedTree> {
    if root >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: root, n: g.n() });
    }
    let mut tree = RootedTree {
        root,
        parent: BTreeMap::new(),
        children: BTreeMap::new(),
    };
    tree.children.insert(root, Vec::new());
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !tree.children.contains_key(&w) {
                tree.parent.insert(w, u);
                tree.children.insert(w, Vec::new());
                tree.children.get_mut(&u).unwrap().push(w);
                queue.push_back(w);
            }
        }
    }
    if tree.len() != g.n() {
        return Err(Error::Disconnected);
    }
    Ok(tree)
}

/// Depth-first patrol tour of the tree; see the module docs. `reversed`
/// returns the element-wise reversal (same multiset of visits, run
/// backwards).
pub fn euler_tour_with_pauses(t: &RootedTree, reversed: bool) -> Vec<Vertex> {
    // Iterative DFS, children ascending: record the vertex on entry and
    // again after each child subtree.
    let mut tour = Vec::with_capacity(2 * t.len());
    // Stack of (vertex, next-child index).
    let mut stack = vec![(t.root(), 0usize)];
    tour.push(t.root());
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        let kids = t.children(v);
        if *next < kids.len() {
            let c = kids[*next];
            *next += 1;
            tour.push(c);
            stack.push((c, 0));
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                tour.push(p);
            }
        }
    }

    let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
    for &v in &tour {
        *count.entry(v).or_default() += 1;
    }
    let mut out = Vec::with_capacity(tour.len() + t.len());
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    for &v in &tour {
        out.push(v);
        if count[&v] < 2 && seen.insert(v) {
            out.push(v);
        }
    }
    debug_assert!(t.len() < 2 || out.len() <= 3 * t.len() - 2);
    if reversed {
        out.reverse();
    }
    out
}
