//! Weighted undirected graphs: construction, structural queries, and
//! synthetic generators.
//!
//! Vertices are 0-based internally; file formats and display are 1-based.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex index {0} out of range for {1} vertices")]
    IndexOutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("non-positive weight {weight} on edge ({i}, {j})")]
    NonPositiveWeight { i: usize, j: usize, weight: f64 },
    #[error("weight table is not square: row {row} has {len} entries, expected {n}")]
    NonSquare { row: usize, len: usize, n: usize },
    #[error("infeasible edge count {requested}: at most {max} distinct pairs on {n} vertices")]
    InfeasibleEdgeCount { requested: usize, max: usize, n: usize },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}

/// An undirected edge with endpoints `i < j` and positive weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Immutable weighted undirected graph.
///
/// Edges are stored once with `i < j` in ascending order; the adjacency
/// index is the symmetric closure with per-vertex neighbor lists sorted by
/// neighbor id.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Builds a graph from 0-based endpoint pairs. Endpoint order within a
    /// pair does not matter; duplicates and self-loops are rejected.
    pub fn new(n: usize, raw_edges: Vec<(usize, usize, f64)>) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (a, b, w) in raw_edges {
            if a >= n {
                return Err(GraphError::IndexOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::IndexOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if w <= 0.0 || !w.is_finite() {
                return Err(GraphError::NonPositiveWeight { i: a.min(b), j: a.max(b), weight: w });
            }
            edges.push(Edge { i: a.min(b), j: a.max(b), weight: w });
        }
        edges.sort_by_key(|e| (e.i, e.j));
        for pair in edges.windows(2) {
            if (pair[0].i, pair[0].j) == (pair[1].i, pair[1].j) {
                return Err(GraphError::DuplicateEdge(pair[0].i, pair[0].j));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.i].push((e.j, e.weight));
            adjacency[e.j].push((e.i, e.weight));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Graph { n, edges, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending `(i, j)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` with weights, sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search_by_key(&b, |&(v, _)| v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().m() == 1
    }

    /// Partitions the vertex set into maximal connected groups.
    pub fn connected_components(&self) -> ComponentPartition {
        let mut seen = vec![false; self.n];
        let mut groups = Vec::new();
        let mut queue = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push(start);
            let mut group = Vec::new();
            while let Some(v) = queue.pop() {
                group.push(v);
                for &(u, _) in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push(u);
                    }
                }
            }
            group.sort_unstable();
            groups.push(group);
        }
        ComponentPartition { groups }
    }

    /// Pairs of non-adjacent vertices at unweighted hop distance exactly 2,
    /// returned sorted with `i < j`.
    pub fn distance_two_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = HashSet::new();
        for v in 0..self.n {
            let nbrs = &self.adjacency[v];
            for (idx, &(a, _)) in nbrs.iter().enumerate() {
                for &(b, _) in &nbrs[idx + 1..] {
                    if !self.has_edge(a, b) {
                        pairs.insert((a.min(b), a.max(b)));
                    }
                }
            }
        }
        let mut out: Vec<_> = pairs.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Subgraph induced by `vertices` (relabeled 0..len), plus the mapping
    /// from new ids back to the originals.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n];
        for (new, &old) in vertices.iter().enumerate() {
            index[old] = new;
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            let (a, b) = (index[e.i], index[e.j]);
            if a != usize::MAX && b != usize::MAX {
                edges.push((a, b, e.weight));
            }
        }
        let sub = Graph::new(vertices.len(), edges).expect("induced subgraph is valid");
        (sub, vertices.to_vec())
    }

    /// Cycle on `n >= 3` vertices, unit weights.
    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
        }
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        edges.push((n - 1, 0, 1.0));
        Graph::new(n, edges)
    }

    /// Perfect binary tree of the given depth: `2^(depth+1) - 1` vertices in
    /// heap order (children of `v` are `2v+1` and `2v+2`), unit weights.
    pub fn binary_tree(depth: u32) -> Result<Graph, GraphError> {
        if depth > 25 {
            return Err(GraphError::InvalidParameter(format!("tree depth {depth} too large")));
        }
        let n = (1usize << (depth + 1)) - 1;
        let mut edges = Vec::with_capacity(n - 1);
        for v in 1..n {
            edges.push(((v - 1) / 2, v, 1.0));
        }
        Graph::new(n, edges)
    }

    /// Random graph on `n` vertices split into `groups` near-equal contiguous
    /// groups, with `edge_count` distinct pairs drawn uniformly by rejection
    /// sampling. Same-group edges get weight `w_in`, cross-group edges `w_out`.
    /// Deterministic for a given seed.
    pub fn grouped_random(
        n: usize,
        groups: usize,
        edge_count: usize,
        w_in: f64,
        w_out: f64,
        seed: u64,
    ) -> Result<Graph, GraphError> {
        if n < 2 || groups == 0 || groups > n {
            return Err(GraphError::InvalidParameter(format!(
                "grouped_random needs 1 <= groups <= n and n >= 2, got n={n} groups={groups}"
            )));
        }
        if w_in <= 0.0 || w_out <= 0.0 || w_in.is_nan() || w_out.is_nan() {
            return Err(GraphError::InvalidParameter("group weights must be positive".into()));
        }
        let max = n * (n - 1) / 2;
        if edge_count == 0 || edge_count > max {
            return Err(GraphError::InfeasibleEdgeCount { requested: edge_count, max, n });
        }
        let labels = group_labels(n, groups);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = HashSet::with_capacity(edge_count);
        let mut edges = Vec::with_capacity(edge_count);
        while edges.len() < edge_count {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let pair = (a.min(b), a.max(b));
            if !seen.insert(pair) {
                continue;
            }
            let w = if labels[pair.0] == labels[pair.1] { w_in } else { w_out };
            edges.push((pair.0, pair.1, w));
        }
        Graph::new(n, edges)
    }
}

/// Group label per vertex for the contiguous near-equal split used by
/// [`Graph::grouped_random`]: the first `n % groups` groups get one extra
/// vertex (e.g. 100 vertices in 3 groups split 34/33/33).
pub fn group_labels(n: usize, groups: usize) -> Vec<usize> {
    let base = n / groups;
    let extra = n % groups;
    let mut labels = Vec::with_capacity(n);
    for g in 0..groups {
        let size = base + usize::from(g < extra);
        labels.extend(std::iter::repeat_n(g, size));
    }
    labels
}

/// Disjoint connected vertex groups covering the whole vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    pub groups: Vec<Vec<usize>>,
}

impl ComponentPartition {
    /// Number of connected components.
    pub fn m(&self) -> usize {
        self.groups.len()
    }
}

/// Symmetrizes a raw square weight table into a graph:
/// `a'[i][j] = (|a[i][j]| + |a[j][i]|) / 2`, dropping the diagonal and any
/// pair whose symmetrized weight is zero.
#[allow(clippy::needless_range_loop)] // paired (i,j)/(j,i) table access
pub fn normalize_weights(table: &[Vec<f64>]) -> Result<Graph, GraphError> {
    let n = table.len();
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != n {
            return Err(GraphError::NonSquare { row, len: entries.len(), n });
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = 0.5 * (table[i][j].abs() + table[j][i].abs());
            if w > 0.0 {
                edges.push((i, j, w));
            }
        }
    }
    Graph::new(n, edges)
}
