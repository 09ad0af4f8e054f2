//! Loop-aware simple graphs, set parameters, quotients by involutions and
//! partition predicates.
//!
//! A loop contributes 1 to the adjacency diagonal and 1 to the degree of its
//! vertex. Independent sets may contain looped vertices.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectra::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge [{0}, {1}] is not of the form [i, j] with i < j; loops go in the loop list")]
    BadEdge(usize, usize),
    #[error("edge [{0}, {1}] listed twice")]
    DuplicateEdge(usize, usize),
    #[error("loop at {0} listed twice")]
    DuplicateLoop(usize),
    #[error("vertex {0} appears twice in the vertex set")]
    DuplicateVertex(usize),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("partition does not cover every vertex exactly once")]
    InvalidPartition,
    #[error("map is not an involution on the vertex set")]
    NotAnInvolution,
    #[error("map is not an automorphism of the graph")]
    NotAnAutomorphism,
    #[error("quotient is not symmetric: orbit {0} sends {2} edges to orbit {1} but receives {3}")]
    AsymmetricQuotient(usize, usize, usize, usize),
    #[error("quotient has a multiple edge: orbit {0} sends {2} edges to orbit {1}")]
    MultiEdge(usize, usize, usize),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// Undirected graph without multiple edges; any vertex may carry one loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    loops: Vec<usize>,
    adj: Vec<Vec<usize>>,
    has_loop: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    loops: Vec<usize>,
}

impl Graph {
    /// Builds a graph from edges `(i, j)` with `i != j` (either orientation) and
    /// a list of looped vertices.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        loops: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::BadEdge(a, b));
            }
            let e = (a.min(b), a.max(b));
            if !edge_set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        let mut loop_set = BTreeSet::new();
        for v in loops {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if !loop_set.insert(v) {
                return Err(GraphError::DuplicateLoop(v));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edge_set {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut has_loop = vec![false; n];
        for &v in &loop_set {
            has_loop[v] = true;
        }
        Ok(Graph {
            n,
            edges: edge_set.into_iter().collect(),
            loops: loop_set.into_iter().collect(),
            adj,
            has_loop,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, [], []).expect("edgeless graph is valid")
    }

    /// Parses the canonical JSON form `{"n": .., "edges": [[i, j], ..], "loops": [..]}`.
    /// Edges must satisfy `i < j < n`; list order is not checked.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        for &[a, b] in &file.edges {
            if a >= b {
                return Err(GraphError::BadEdge(a, b));
            }
        }
        Graph::new(file.n, file.edges.iter().map(|&[a, b]| (a, b)), file.loops)
    }

    /// Canonical compact JSON: keys n, edges, loops; edges sorted with `i < j`.
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            loops: self.loops.clone(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges `(i, j)`, `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Looped vertices, sorted.
    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    pub fn has_loops(&self) -> bool {
        !self.loops.is_empty()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_loop[v]
    }

    /// Neighbours of `v` other than `v` itself, sorted.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// `true` if `u` and `v` are adjacent; for `u == v` this is the loop test.
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            self.has_loop[u]
        } else {
            self.adj[u].binary_search(&v).is_ok()
        }
    }

    /// Degree with the loop counted once.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len() + usize::from(self.has_loop[v])
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    /// The common degree if the graph is regular (loops counted once).
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn without_loops(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.clone(),
            loops: Vec::new(),
            adj: self.adj.clone(),
            has_loop: vec![false; self.n],
        }
    }

    /// Adjacency matrix with 1 on the diagonal at looped vertices.
    pub fn adjacency_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n);
        for &(a, b) in &self.edges {
            m[(a, b)] = 1.0;
            m[(b, a)] = 1.0;
        }
        for &v in &self.loops {
            m[(v, v)] = 1.0;
        }
        m
    }

    /// `L = D − A` of the graph with its loops removed.
    pub fn laplacian(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n);
        for &(a, b) in &self.edges {
            m[(a, b)] = -1.0;
            m[(b, a)] = -1.0;
        }
        for v in 0..self.n {
            m[(v, v)] = self.adj[v].len() as f64;
        }
        m
    }

    /// Induced subgraph on `keep` (in the given order), relabelled `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> Result<Graph, GraphError> {
        let mask = membership(self.n, keep)?;
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| mask[a] && mask[b])
            .map(|&(a, b)| (index[a], index[b]));
        let loops = self.loops.iter().filter(|&&v| mask[v]).map(|&v| index[v]);
        Graph::new(keep.len(), edges, loops)
    }

    fn neighbors_in(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&u| mask[u]).count() + usize::from(self.has_loop[v] && mask[v])
    }
}

/// Validates a vertex list and returns its indicator vector.
pub fn membership(n: usize, set: &[usize]) -> Result<Vec<bool>, GraphError> {
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n });
        }
        if std::mem::replace(&mut mask[v], true) {
            return Err(GraphError::DuplicateVertex(v));
        }
    }
    Ok(mask)
}

/// Size, loop count and the two degree parameters of a vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetParams {
    pub s: usize,
    pub s1: usize,
    /// Average degree over the set.
    pub dbar_s: Ratio<i64>,
    /// `2·dbar_s` minus the average degree of the whole graph.
    pub k_s: Ratio<i64>,
}

impl SetParams {
    pub fn dbar_s_f64(&self) -> f64 {
        ratio_f64(self.dbar_s)
    }

    pub fn k_s_f64(&self) -> f64 {
        ratio_f64(self.k_s)
    }
}

pub fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn set_params(g: &Graph, set: &[usize]) -> Result<SetParams, GraphError> {
    let mask = membership(g.n, set)?;
    if set.is_empty() {
        return Err(GraphError::EmptySet);
    }
    let s = set.len();
    let s1 = set.iter().filter(|&&v| g.has_loop[v]).count();
    let set_sum: usize = set.iter().map(|&v| g.degree(v)).sum();
    let total: usize = g.degrees().iter().sum();
    debug_assert_eq!(mask.iter().filter(|&&b| b).count(), s);
    let dbar_s = Ratio::new(set_sum as i64, s as i64);
    let k_s = dbar_s * 2 - Ratio::new(total as i64, g.n as i64);
    Ok(SetParams { s, s1, dbar_s, k_s })
}

/// No two distinct members of `set` are adjacent. Loops are allowed.
/// Out-of-range or repeated vertices make the answer `false`.
pub fn is_independent(g: &Graph, set: &[usize]) -> bool {
    let Ok(mask) = membership(g.n, set) else {
        return false;
    };
    set.iter().all(|&v| g.adj[v].iter().all(|&u| !mask[u]))
}

/// Checks that every vertex of each cell has the same number of neighbours in
/// each cell. A loop counts as one neighbour in the vertex's own cell.
pub fn is_equitable(g: &Graph, partition: &[Vec<usize>]) -> Result<bool, GraphError> {
    let mut cell_of = vec![usize::MAX; g.n];
    for (c, cell) in partition.iter().enumerate() {
        for &v in cell {
            if v >= g.n || cell_of[v] != usize::MAX {
                return Err(GraphError::InvalidPartition);
            }
            cell_of[v] = c;
        }
    }
    if cell_of.contains(&usize::MAX) {
        return Err(GraphError::InvalidPartition);
    }
    let profile = |v: usize| {
        let mut counts = vec![0usize; partition.len()];
        for &u in &g.adj[v] {
            counts[cell_of[u]] += 1;
        }
        if g.has_loop[v] {
            counts[cell_of[v]] += 1;
        }
        counts
    };
    Ok(partition.iter().all(|cell| {
        let mut it = cell.iter().map(|&v| profile(v));
        match it.next() {
            Some(first) => it.all(|p| p == first),
            None => true,
        }
    }))
}

/// Outcome of [`semiregular_bipartite`]. When `holds` is false the counts are
/// those of the first vertex on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiRegular {
    pub holds: bool,
    /// Neighbours outside `S` of each vertex in `S`.
    pub e_out: usize,
    /// Neighbours in `S` of each vertex outside `S`.
    pub e_in: usize,
}

pub fn semiregular_bipartite(g: &Graph, set: &[usize]) -> Result<SemiRegular, GraphError> {
    let mask = membership(g.n, set)?;
    let outside: Vec<bool> = mask.iter().map(|&b| !b).collect();
    let out_counts: Vec<usize> = (0..g.n)
        .filter(|&v| mask[v])
        .map(|v| g.neighbors_in(v, &outside))
        .collect();
    let in_counts: Vec<usize> = (0..g.n)
        .filter(|&v| !mask[v])
        .map(|v| g.neighbors_in(v, &mask))
        .collect();
    let constant = |c: &[usize]| c.windows(2).all(|w| w[0] == w[1]);
    Ok(SemiRegular {
        holds: constant(&out_counts) && constant(&in_counts),
        e_out: out_counts.first().copied().unwrap_or(0),
        e_in: in_counts.first().copied().unwrap_or(0),
    })
}

/// Orbits of an involution, each sorted, ordered by smallest member.
pub fn orbits(sigma: &[usize]) -> Result<Vec<Vec<usize>>, GraphError> {
    let n = sigma.len();
    for (v, &w) in sigma.iter().enumerate() {
        if w >= n || sigma[w] != v {
            return Err(GraphError::NotAnInvolution);
        }
    }
    Ok((0..n)
        .filter(|&v| v <= sigma[v])
        .map(|v| {
            if sigma[v] == v {
                vec![v]
            } else {
                vec![v, sigma[v]]
            }
        })
        .collect())
}

pub fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
    perm.len() == g.n
        && g.edges
            .iter()
            .all(|&(a, b)| g.is_adjacent(perm[a], perm[b]))
        && g.loops.iter().all(|&v| g.has_loop[perm[v]])
        && {
            let mut seen = vec![false; g.n];
            perm.iter()
                .all(|&w| w < g.n && !std::mem::replace(&mut seen[w], true))
        }
}

/// Quotient of `y` by the involutive automorphism `sigma`.
///
/// Vertex `i` of the result is the `i`-th orbit in [`orbits`] order. Fails
/// unless the orbit-to-orbit edge counts are symmetric and at most one.
pub fn quotient(y: &Graph, sigma: &[usize]) -> Result<Graph, GraphError> {
    if sigma.len() != y.n {
        return Err(GraphError::NotAnInvolution);
    }
    let cells = orbits(sigma)?;
    if !is_automorphism(y, sigma) {
        return Err(GraphError::NotAnAutomorphism);
    }
    let mut orbit_of = vec![0; y.n];
    for (c, cell) in cells.iter().enumerate() {
        for &v in cell {
            orbit_of[v] = c;
        }
    }
    // w[i][j] counted from the first vertex of cell i; the orbit partition of
    // an automorphism is equitable, so any representative gives the same row.
    let weights: Vec<Vec<usize>> = cells
        .iter()
        .map(|cell| {
            let u = cell[0];
            let mut row = vec![0usize; cells.len()];
            for &v in &y.adj[u] {
                row[orbit_of[v]] += 1;
            }
            if y.has_loop[u] {
                row[orbit_of[u]] += 1;
            }
            row
        })
        .collect();
    let m = cells.len();
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for (i, row) in weights.iter().enumerate() {
        for (j, &wij) in row.iter().enumerate().skip(i) {
            let wji = weights[j][i];
            if wij != wji {
                return Err(GraphError::AsymmetricQuotient(i, j, wij, wji));
            }
            if wij >= 2 {
                return Err(GraphError::MultiEdge(i, j, wij));
            }
            if wij == 1 {
                if i == j {
                    loops.push(i);
                } else {
                    edges.push((i, j));
                }
            }
        }
    }
    Graph::new(m, edges, loops)
}
