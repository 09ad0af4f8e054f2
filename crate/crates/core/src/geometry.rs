//! The projective plane PG(2,q), its orthogonal polarity, and the graphs
//! built from them.

use crate::galois::{Field, FieldError};
use crate::graphcore::Graph;

/// A point of PG(2,q): a nonzero triple whose first nonzero coordinate is 1,
/// stored as field element codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint {
    coords: [u32; 3],
}

impl ProjectivePoint {
    /// Normalizes a nonzero triple of codes of `field`.
    pub fn normalized(field: &Field, coords: [u32; 3]) -> Option<Self> {
        let lead = *coords.iter().find(|&&c| c != 0)?;
        let scale = field.inv_code(lead)?;
        Some(ProjectivePoint {
            coords: coords.map(|c| field.mul_codes(c, scale)),
        })
    }

    pub fn coords(&self) -> [u32; 3] {
        self.coords
    }

    /// `xᵀy` as a field code.
    pub fn dot(&self, other: &ProjectivePoint, field: &Field) -> u32 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0, |acc, (&a, &b)| {
                field.add_codes(acc, field.mul_codes(a, b))
            })
    }

    pub fn is_orthogonal(&self, other: &ProjectivePoint, field: &Field) -> bool {
        self.dot(other, field) == 0
    }
}

/// All q²+q+1 points in lexicographic order of their coordinate codes.
pub fn enumerate_points(field: &Field) -> Vec<ProjectivePoint> {
    let q = field.order();
    let mut points = Vec::with_capacity((q * q + q + 1) as usize);
    points.push(ProjectivePoint { coords: [0, 0, 1] });
    for a in 0..q {
        points.push(ProjectivePoint { coords: [0, 1, a] });
    }
    for a in 0..q {
        for b in 0..q {
            points.push(ProjectivePoint { coords: [1, a, b] });
        }
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    points
}

/// Indices (in [`enumerate_points`] order) of the self-orthogonal points.
pub fn absolute_points(field: &Field) -> Vec<usize> {
    enumerate_points(field)
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_orthogonal(p, field))
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopMode {
    /// All points; absolute points carry loops.
    Keep,
    /// All points; loops removed.
    DropLoops,
    /// Absolute points deleted (q² vertices).
    DropAbsoluteVertices,
}

/// The orthogonality graph on the points of PG(2,q).
pub fn er_graph(q: u64, mode: LoopMode) -> Result<Graph, FieldError> {
    let field = Field::new(q)?;
    Ok(er_graph_over(&field, mode))
}

pub fn er_graph_over(field: &Field, mode: LoopMode) -> Graph {
    let points = enumerate_points(field);
    let keep: Vec<usize> = match mode {
        LoopMode::DropAbsoluteVertices => (0..points.len())
            .filter(|&i| !points[i].is_orthogonal(&points[i], field))
            .collect(),
        _ => (0..points.len()).collect(),
    };
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for (i, &a) in keep.iter().enumerate() {
        if mode == LoopMode::Keep && points[a].is_orthogonal(&points[a], field) {
            loops.push(i);
        }
        for (j, &b) in keep.iter().enumerate().skip(i + 1) {
            if points[a].is_orthogonal(&points[b], field) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(keep.len(), edges, loops).expect("orthogonality graph is simple")
}

/// Order-two permutation of the incidence graph vertices swapping point `i`
/// with line `v + i`, where `v = q²+q+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarity {
    perm: Vec<usize>,
    points: usize,
}

impl Polarity {
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, v: usize) -> usize {
        self.perm[v]
    }

    /// Number of points (equivalently, of lines).
    pub fn point_count(&self) -> usize {
        self.points
    }

    /// The image is of the other colour class.
    pub fn swaps_colours(&self) -> bool {
        self.perm
            .iter()
            .enumerate()
            .all(|(v, &w)| (v < self.points) != (w < self.points))
    }
}

/// Point–line incidence graph of PG(2,q) and the polarity `x ↦ x^⊥`.
///
/// Vertices `0..v` are the points in [`enumerate_points`] order; vertex `v + i`
/// is the line `{y : x_iᵀy = 0}`.
pub fn incidence_graph_with_polarity(q: u64) -> Result<(Graph, Polarity), FieldError> {
    let field = Field::new(q)?;
    let points = enumerate_points(&field);
    let v = points.len();
    let mut edges = Vec::with_capacity(v * (q as usize + 1));
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            if x.is_orthogonal(y, &field) {
                // point j lies on line i
                edges.push((j, v + i));
            }
        }
    }
    let graph = Graph::new(2 * v, edges, []).expect("incidence graph is simple");
    let perm = (0..2 * v)
        .map(|u| if u < v { u + v } else { u - v })
        .collect();
    Ok((graph, Polarity { perm, points: v }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{is_automorphism, quotient};

    fn shortest_cycle(g: &Graph) -> Option<usize> {
        use std::collections::VecDeque;
        let mut best = None::<usize>;
        for s in 0..g.n() {
            let mut dist = vec![usize::MAX; g.n()];
            let mut parent = vec![usize::MAX; g.n()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in g.neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    #[test]
    fn point_counts() {
        for (q, count) in [(2, 7), (3, 13), (4, 21), (9, 91)] {
            let f = Field::new(q).unwrap();
            let pts = enumerate_points(&f);
            assert_eq!(pts.len(), count);
            let unique: std::collections::BTreeSet<_> = pts.iter().collect();
            assert_eq!(unique.len(), count);
            for p in &pts {
                assert_eq!(ProjectivePoint::normalized(&f, p.coords()), Some(*p));
            }
        }
    }

    #[test]
    fn normalization_collapses_scalar_multiples() {
        let f = Field::new(5).unwrap();
        let p = ProjectivePoint::normalized(&f, [0, 3, 4]).unwrap();
        assert_eq!(p.coords(), [0, 1, 3]);
        assert_eq!(ProjectivePoint::normalized(&f, [0, 0, 0]), None);
    }

    #[test]
    fn er3_counts() {
        let g = er_graph(3, LoopMode::Keep).unwrap();
        assert_eq!(g.n(), 13);
        assert_eq!(g.loop_count(), 4);
        assert_eq!(g.regular_degree(), Some(4));
        assert!(g.adjacency_matrix().row_sums().iter().all(|&s| s == 4.0));

        let g = er_graph(3, LoopMode::DropAbsoluteVertices).unwrap();
        assert_eq!(g.n(), 9);
        assert!(!g.has_loops());

        let g = er_graph(3, LoopMode::DropLoops).unwrap();
        assert_eq!(g.n(), 13);
        let mut degrees = g.degrees();
        degrees.sort_unstable();
        assert_eq!(&degrees[..4], &[3, 3, 3, 3]);
        assert!(degrees[4..].iter().all(|&d| d == 4));
    }

    #[test]
    fn absolute_point_count_is_q_plus_one() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let f = Field::new(q).unwrap();
            assert_eq!(absolute_points(&f).len() as u64, q + 1, "q={q}");
        }
    }

    #[test]
    fn er_graph_has_no_four_cycle() {
        for q in [2u64, 3, 4, 5] {
            let g = er_graph(q, LoopMode::DropLoops).unwrap();
            // C4-free iff no two distinct vertices share two common neighbours.
            for a in 0..g.n() {
                for b in a + 1..g.n() {
                    let common = g
                        .neighbors(a)
                        .iter()
                        .filter(|x| g.neighbors(b).binary_search(x).is_ok())
                        .count();
                    assert!(common <= 1, "q={q}: {a},{b} share {common}");
                }
            }
        }
    }

    #[test]
    fn heawood_graph() {
        let (g, pol) = incidence_graph_with_polarity(2).unwrap();
        assert_eq!(g.n(), 14);
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(shortest_cycle(&g), Some(6));
        assert!(pol.swaps_colours());
    }

    #[test]
    fn incidence_graph_q3() {
        let (g, pol) = incidence_graph_with_polarity(3).unwrap();
        assert_eq!(g.n(), 26);
        assert_eq!(g.regular_degree(), Some(4));
        assert!(g.edges().iter().all(|&(a, b)| (a < 13) != (b < 13)));
        assert!(is_automorphism(&g, pol.permutation()));
        assert!((0..26).all(|v| pol.apply(pol.apply(v)) == v && pol.apply(v) != v));
    }

    #[test]
    fn quotient_by_polarity_is_er_graph() {
        for q in [2u64, 3, 4, 5, 7] {
            let (y, pol) = incidence_graph_with_polarity(q).unwrap();
            let x = quotient(&y, pol.permutation()).unwrap();
            assert_eq!(x, er_graph(q, LoopMode::Keep).unwrap(), "q={q}");
        }
    }

    #[test]
    fn rejects_non_prime_power() {
        assert_eq!(
            er_graph(6, LoopMode::Keep).unwrap_err(),
            FieldError::NotAPrimePower(6)
        );
        assert!(incidence_graph_with_polarity(10).is_err());
    }
}
