//! Maximum-weight strongly decomposable spanning forests.
//!
//! Kruskal's algorithm over penalized mutual-information weights, with two
//! extra admission rules: only edges of positive weight are considered, and
//! an edge may not create a path between two discrete vertices that runs
//! through a continuous one. Within every component the discrete vertices
//! therefore always form a single connected all-discrete subtree, so the
//! second rule reduces to a per-component "has a discrete vertex" flag:
//! joining two components that both contain discrete vertices is allowed
//! only through an edge whose endpoints are both discrete.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dataset::KindTag;
use crate::error::{Error, Result};
use crate::mi::{MiTable, Penalty};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Penalized weight used for ordering and admission.
    pub weight: f64,
    /// Unpenalized mutual information.
    pub raw_i: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: f64, raw_i: f64) -> Edge {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        Edge { u, v, weight, raw_i }
    }
}

/// Weight descending, then raw MI descending, then index pair ascending.
fn kruskal_order(a: &Edge, b: &Edge) -> Ordering {
    b.weight
        .total_cmp(&a.weight)
        .then_with(|| b.raw_i.total_cmp(&a.raw_i))
        .then_with(|| (a.u, a.v).cmp(&(b.u, b.v)))
}

/// Disjoint sets that also track whether a set contains a discrete vertex.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    has_discrete: Vec<bool>,
}

impl UnionFind {
    pub fn new(kinds: &[KindTag]) -> UnionFind {
        UnionFind {
            parent: (0..kinds.len()).collect(),
            size: vec![1; kinds.len()],
            has_discrete: kinds.iter().map(|&k| k == KindTag::Discrete).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn has_discrete(&mut self, x: usize) -> bool {
        let r = self.find(x);
        self.has_discrete[r]
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.has_discrete[ra] |= self.has_discrete[rb];
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    kinds: Vec<KindTag>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

/// Builds the forest from a table of pairwise estimates.
pub fn build_forest(table: &MiTable, penalty: Penalty) -> Forest {
    let candidates = table
        .pairs()
        .map(|(u, v, e)| Edge::new(u, v, e.penalized(penalty), e.i_value))
        .collect();
    build_forest_from_candidates(table.kinds().to_vec(), candidates)
}

/// Kruskal over arbitrary candidate edges with the positivity and
/// forbidden-path admission rules.
pub fn build_forest_from_candidates(kinds: Vec<KindTag>, mut candidates: Vec<Edge>) -> Forest {
    candidates.retain(|e| e.weight > 0.0 && e.u != e.v);
    candidates.sort_by(kruskal_order);
    let mut sets = UnionFind::new(&kinds);
    let mut edges = Vec::new();
    for e in candidates {
        let (ru, rv) = (sets.find(e.u), sets.find(e.v));
        if ru == rv {
            continue;
        }
        let both_discrete = kinds[e.u] == KindTag::Discrete && kinds[e.v] == KindTag::Discrete;
        if sets.has_discrete(ru) && sets.has_discrete(rv) && !both_discrete {
            continue;
        }
        sets.union(ru, rv);
        edges.push(e);
    }
    Forest::assemble(kinds, edges)
}

impl Forest {
    fn assemble(kinds: Vec<KindTag>, edges: Vec<Edge>) -> Forest {
        let mut adjacency = vec![Vec::new(); kinds.len()];
        for e in &edges {
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Forest {
            kinds,
            edges,
            adjacency,
        }
    }

    /// Forest from explicit edges; rejects out-of-range endpoints and cycles.
    /// Forbidden paths are not rejected here, see
    /// [`Forest::forbidden_path_violations`].
    pub fn from_edges(kinds: Vec<KindTag>, edges: Vec<Edge>) -> Result<Forest> {
        let mut sets = UnionFind::new(&kinds);
        for e in &edges {
            if e.u >= kinds.len() || e.v >= kinds.len() {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) outside {} nodes",
                    e.u,
                    e.v,
                    kinds.len()
                )));
            }
            if !sets.union(e.u, e.v) {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) closes a cycle",
                    e.u, e.v
                )));
            }
        }
        Ok(Forest::assemble(kinds, edges))
    }

    pub fn n_nodes(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[KindTag] {
        &self.kinds
    }

    /// Edges in order of admission.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Nodes reachable from `start`, in breadth-first order, with parents.
    fn bfs(&self, start: usize) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut parent = vec![None; self.n_nodes()];
        let mut seen = vec![false; self.n_nodes()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        (order, parent)
    }

    /// Sorted members of the tree containing `v`.
    pub fn component_of(&self, v: usize) -> Vec<usize> {
        let mut nodes = self.bfs(v).0;
        nodes.sort_unstable();
        nodes
    }

    /// Connected components (trees, including singletons), each sorted and
    /// listed by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.n_nodes()];
        let mut out = Vec::new();
        for v in 0..self.n_nodes() {
            if !assigned[v] {
                let comp = self.component_of(v);
                for &x in &comp {
                    assigned[x] = true;
                }
                out.push(comp);
            }
        }
        out
    }

    /// Vertices of the unique path from `a` to `b`, both ends included.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (_, parent) = self.bfs(a);
        if a != b && parent[b].is_none() {
            return None;
        }
        let mut path = vec![b];
        let mut x = b;
        while let Some(p) = parent[x] {
            path.push(p);
            x = p;
        }
        path.reverse();
        Some(path)
    }

    /// Pairs of discrete vertices in one tree whose connecting path passes
    /// through a continuous vertex. Empty for every forest built by
    /// [`build_forest`].
    pub fn forbidden_path_violations(&self) -> Vec<(usize, usize)> {
        let discrete: Vec<usize> = (0..self.n_nodes())
            .filter(|&v| self.kinds[v] == KindTag::Discrete)
            .collect();
        let mut out = Vec::new();
        for (i, &a) in discrete.iter().enumerate() {
            for &b in &discrete[i + 1..] {
                if let Some(path) = self.path(a, b) {
                    if path.iter().any(|&x| self.kinds[x] == KindTag::Continuous) {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    /// Recomputes acyclicity with a fresh union-find pass.
    pub fn is_acyclic(&self) -> bool {
        let mut sets = UnionFind::new(&self.kinds);
        self.edges.iter().all(|e| sets.union(e.u, e.v))
    }
}
