//! Small named graph families used as comparison cases and test corpus.

use rand::Rng;
use thiserror::Error;

use crate::graphcore::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("K_{{a,b}} needs 1 <= a < b, got a={a}, b={b}")]
    BadBipartite { a: usize, b: usize },
    #[error("X_m needs m > 1, got m={0}")]
    BadXm(usize),
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Graph::new(n, edges, []).expect("complete graph")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)), []).expect("cycle")
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i)), []).expect("path")
}

/// `K_{1,leaves}` with the centre at vertex 0.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)), []).expect("star")
}

/// Outer 5-cycle `0..5`, spokes from `i` to `i+5`, inner pentagram on `5..10`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner), []).expect("petersen")
}

/// `K_{a,b}` for `a < b`: vertices `0..a` form the small side, `a..a+b` the large side.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, FamilyError> {
    if a == 0 || a >= b {
        return Err(FamilyError::BadBipartite { a, b });
    }
    Ok(complete_bipartite_unchecked(a, b))
}

/// `K_{a,b}` for any sizes, including `a >= b`.
pub fn complete_bipartite_unchecked(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)));
    Graph::new(a + b, edges, []).expect("complete bipartite")
}

/// The join of `m` isolated vertices (`0..m`) with the cycle `C_{2m+1}` (`m..3m+1`).
pub fn x_m(m: usize) -> Result<Graph, FamilyError> {
    if m <= 1 {
        return Err(FamilyError::BadXm(m));
    }
    let h = 2 * m + 1;
    let join = (0..m).flat_map(|i| (m..m + h).map(move |j| (i, j)));
    let cyc = (0..h).map(|i| (m + i, m + (i + 1) % h));
    Ok(Graph::new(m + h, join.chain(cyc), []).expect("X_m"))
}

/// Vertex set of the `C_{2m+1}` part of [`x_m`] restricted to a maximum
/// independent set of that cycle.
pub fn x_m_cycle_independent_set(m: usize) -> Vec<usize> {
    (0..m).map(|i| m + 2 * i).collect()
}

/// Erdős–Rényi-style random graph with independent edge and loop probabilities.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p_edge: f64, p_loop: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p_edge) {
                edges.push((i, j));
            }
        }
    }
    let loops: Vec<usize> = (0..n).filter(|_| rng.gen_bool(p_loop)).collect();
    Graph::new(n, edges, loops).expect("random graph")
}
