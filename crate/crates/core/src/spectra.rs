//! Dense symmetric eigenvalues, multiplicity clustering, and the
//! characteristic-polynomial checks for the polarity graphs ER(q).

use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::galois::FieldError;
use crate::geometry::{er_graph, LoopMode};

/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of the full Frobenius norm.
pub const CONVERGENCE_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are reported as one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Entrywise symmetry tolerance on input matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Tolerance used when matching computed eigenvalues against polynomial roots.
pub const CHARPOLY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix is not symmetric: |M[{i},{j}] - M[{j},{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("Jacobi iteration did not converge within {MAX_SWEEPS} sweeps")]
    NoConvergence,
    #[error("matrix rows have inconsistent lengths")]
    NotSquare,
    #[error("need at least {needed} eigenvalues, matrix has order {n}")]
    TooSmall { needed: usize, n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Square dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SpectraError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(SpectraError::NotSquare);
        }
        Ok(Matrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self + diag(d)`.
    pub fn add_diagonal(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.n);
        let mut m = self.clone();
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] += x;
        }
        m
    }

    pub fn scaled(&self, c: f64) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// First pair violating symmetry by more than `tol`, if any.
    pub fn asymmetry(&self, tol: f64) -> Option<(usize, usize, f64)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let diff = (self[(i, j)] - self[(j, i)]).abs();
                if diff > tol || diff.is_nan() {
                    return Some((i, j, diff));
                }
            }
        }
        None
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalues in ascending order together with their multiplicity clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    tolerance: f64,
    clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Sorts `values` and groups runs whose consecutive gaps are at most `tolerance`.
    pub fn from_values(mut values: Vec<f64>, tolerance: f64) -> Self {
        values.sort_by(f64::total_cmp);
        let mut clusters: Vec<Cluster> = Vec::new();
        let mut start = 0;
        for i in 0..values.len() {
            let last = i + 1 == values.len();
            if last || values[i + 1] - values[i] > tolerance {
                let run = &values[start..=i];
                clusters.push(Cluster {
                    value: run.iter().sum::<f64>() / run.len() as f64,
                    multiplicity: run.len(),
                });
                start = i + 1;
            }
        }
        Spectrum {
            values,
            tolerance,
            clusters,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn least(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn greatest(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Number of eigenvalues within `tol` of `x`.
    pub fn multiplicity_near(&self, x: f64, tol: f64) -> usize {
        self.values.iter().filter(|v| (*v - x).abs() <= tol).count()
    }
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn eigenvalues(m: &Matrix) -> Result<Spectrum, SpectraError> {
    if let Some((i, j, diff)) = m.asymmetry(SYMMETRY_TOL) {
        return Err(SpectraError::NotSymmetric { i, j, diff });
    }
    let values = jacobi(m)?;
    Ok(Spectrum::from_values(values, CLUSTER_TOL))
}

fn jacobi(m: &Matrix) -> Result<Vec<f64>, SpectraError> {
    let n = m.n;
    let mut a = m.clone();
    // Symmetrize exactly so both triangles evolve identically.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let threshold = CONVERGENCE_TOL * a.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            return Ok(a.diagonal());
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let (arp, arq) = (a[(r, p)], a[(r, q)]);
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    Err(SpectraError::NoConvergence)
}

/// Least, second largest and greatest eigenvalue, plus
/// `lambda = max(second largest, |least|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub least: f64,
    pub second_largest: f64,
    pub greatest: f64,
    pub lambda: f64,
}

pub fn extreme_eigs(m: &Matrix) -> Result<Extremes, SpectraError> {
    let spec = eigenvalues(m)?;
    extremes_of(&spec)
}

pub fn extremes_of(spec: &Spectrum) -> Result<Extremes, SpectraError> {
    let v = spec.values();
    if v.len() < 2 {
        return Err(SpectraError::TooSmall {
            needed: 2,
            n: v.len(),
        });
    }
    let least = v[0];
    let second_largest = v[v.len() - 2];
    Ok(Extremes {
        least,
        second_largest,
        greatest: v[v.len() - 1],
        lambda: second_largest.max(least.abs()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErVariant {
    /// ER(q) with its absolute vertices removed (q² vertices).
    DeletedAbsolute,
    /// ER(q) with the loops removed (q²+q+1 vertices).
    Loopless,
}

/// The cubic factor `λ³ − qλ² − 2qλ + q² + q` of the loopless ER(q)
/// characteristic polynomial.
pub fn er_cubic(q: f64, x: f64) -> f64 {
    ((x - q) * x - 2.0 * q) * x + q * q + q
}

fn er_cubic_derivative(q: f64, x: f64) -> f64 {
    (3.0 * x - 2.0 * q) * x - 2.0 * q
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All three real roots of the ER cubic, ascending, by bisection between its
/// critical points.
pub fn er_cubic_roots(q: f64) -> [f64; 3] {
    let disc = (q * q + 6.0 * q).sqrt();
    let (c1, c2) = ((q - disc) / 3.0, (q + disc) / 3.0);
    let f = |x| er_cubic(q, x);
    [
        bisect(f, -q, c1, 1e-13),
        bisect(f, c1, c2, 1e-13),
        bisect(f, c2, 2.0 * q, 1e-13),
    ]
}

/// Least root of the ER cubic by bisection on `[−q, −√q]`.
pub fn bisection_least_root(q: u64) -> f64 {
    let qf = q as f64;
    bisect(|x| er_cubic(qf, x), -qf, -qf.sqrt(), 1e-12)
}

/// Newton iterates on the ER cubic started from `−√q`. On that branch the
/// cubic is increasing and concave, so every iterate stays below the least root.
pub fn newton_least_root(q: u64, iterations: usize) -> f64 {
    let qf = q as f64;
    let mut x = -qf.sqrt();
    for _ in 0..iterations {
        let slope = er_cubic_derivative(qf, x);
        assert!(slope != 0.0, "ER cubic has zero slope at {x}");
        x -= er_cubic(qf, x) / slope;
    }
    x
}

/// Roots, with multiplicity and ascending, of the factored characteristic
/// polynomial of the given ER(q) variant.
pub fn er_charpoly_roots(q: u64, variant: ErVariant) -> Vec<f64> {
    let qf = q as f64;
    let r = qf.sqrt();
    let half = ((q * q - q - 2) / 2) as usize;
    let mut roots = Vec::new();
    match variant {
        ErVariant::DeletedAbsolute => {
            roots.push(qf);
            roots.push(0.0);
            roots.extend(std::iter::repeat_n(-1.0, q as usize));
        }
        ErVariant::Loopless => {
            roots.extend(er_cubic_roots(qf));
            let d = (4.0 * qf - 3.0).sqrt();
            roots.extend(std::iter::repeat_n((-1.0 + d) / 2.0, q as usize));
            roots.extend(std::iter::repeat_n((-1.0 - d) / 2.0, q as usize));
        }
    }
    roots.extend(std::iter::repeat_n(r, half));
    roots.extend(std::iter::repeat_n(-r, half));
    roots.sort_by(f64::total_cmp);
    roots
}

/// Checks the computed spectrum of an ER(q) variant against its stated
/// characteristic polynomial, with multiplicity.
pub fn verify_er_charpoly(q: u64, variant: ErVariant) -> Result<bool, SpectraError> {
    let mode = match variant {
        ErVariant::DeletedAbsolute => LoopMode::DropAbsoluteVertices,
        ErVariant::Loopless => LoopMode::DropLoops,
    };
    let g = er_graph(q, mode)?;
    let spec = eigenvalues(&g.adjacency_matrix())?;
    let expected = er_charpoly_roots(q, variant);
    Ok(spec.len() == expected.len()
        && spec
            .values()
            .iter()
            .zip(&expected)
            .all(|(a, b)| (a - b).abs() <= CHARPOLY_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn zero_matrix_spectrum() {
        let spec = eigenvalues(&Matrix::zeros(5)).unwrap();
        assert_eq!(spec.values(), &[0.0; 5]);
        assert_eq!(spec.clusters().len(), 1);
        assert_eq!(spec.clusters()[0].multiplicity, 5);
    }

    #[test]
    fn empty_and_singleton() {
        assert!(eigenvalues(&Matrix::zeros(0)).unwrap().is_empty());
        let one = Matrix::from_rows(&[vec![3.5]]).unwrap();
        assert_eq!(eigenvalues(&one).unwrap().values(), &[3.5]);
        assert!(matches!(
            extreme_eigs(&one),
            Err(SpectraError::TooSmall { needed: 2, n: 1 })
        ));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(matches!(
            eigenvalues(&m),
            Err(SpectraError::NotSymmetric { i: 0, j: 1, .. })
        ));
        assert_eq!(
            Matrix::from_rows(&[vec![0.0, 1.0], vec![0.5]]).unwrap_err(),
            SpectraError::NotSquare
        );
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let spec = eigenvalues(&m).unwrap();
        assert!((spec.values()[0] - 1.0).abs() < 1e-14);
        assert!((spec.values()[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn petersen_extremes() {
        let e = extreme_eigs(&families::petersen().adjacency_matrix()).unwrap();
        assert!((e.least + 2.0).abs() < 1e-10);
        assert!((e.second_largest - 1.0).abs() < 1e-10);
        assert!((e.greatest - 3.0).abs() < 1e-10);
        assert!((e.lambda - 2.0).abs() < 1e-10);
    }

    #[test]
    fn complete_graph_extremes() {
        for n in 2..8 {
            let e = extreme_eigs(&families::complete(n).adjacency_matrix()).unwrap();
            assert!((e.least + 1.0).abs() < 1e-10);
            assert!((e.second_largest + 1.0).abs() < 1e-10);
            assert!((e.greatest - (n as f64 - 1.0)).abs() < 1e-10);
            assert!((e.lambda - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn xm_least_eigenvalue() {
        let e = extreme_eigs(&families::x_m(2).unwrap().adjacency_matrix()).unwrap();
        assert!((e.least - (1.0 - 11f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn complete_bipartite_least_eigenvalue() {
        for (a, b) in [(1, 4), (2, 3), (4, 23)] {
            let g = families::complete_bipartite(a, b).unwrap();
            let spec = eigenvalues(&g.adjacency_matrix()).unwrap();
            let expect = -((a * b) as f64).sqrt();
            assert!((spec.least().unwrap() - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn clustering_groups_close_values() {
        let s = Spectrum::from_values(vec![1.0, -1.0, 1.0 + 1e-10, 3.0], 1e-8);
        assert_eq!(s.values(), &[-1.0, 1.0, 1.0 + 1e-10, 3.0]);
        let mult: Vec<usize> = s.clusters().iter().map(|c| c.multiplicity).collect();
        assert_eq!(mult, vec![1, 2, 1]);
        assert_eq!(s.multiplicity_near(1.0, 1e-6), 2);
    }

    #[test]
    fn newton_q3_iterates() {
        let w1 = newton_least_root(3, 1);
        let w2 = newton_least_root(3, 2);
        assert!((w1 - -2.344_055_426).abs() < 1e-8);
        assert!((w2 - -2.209_662_562).abs() < 1e-8);
        let exact = bisection_least_root(3);
        assert!((exact - -2.201_472_338).abs() < 1e-8);
        assert!(w1 <= w2 && w2 <= exact);
    }

    #[test]
    fn newton_q5_iterates() {
        assert!((newton_least_root(5, 2) - -2.725_649_697).abs() < 1e-8);
        assert!((bisection_least_root(5) - -2.722_139_645).abs() < 1e-8);
    }

    #[test]
    fn charpoly_root_lists_have_graph_order() {
        for q in [3u64, 5, 7] {
            assert_eq!(
                er_charpoly_roots(q, ErVariant::DeletedAbsolute).len() as u64,
                q * q
            );
            assert_eq!(
                er_charpoly_roots(q, ErVariant::Loopless).len() as u64,
                q * q + q + 1
            );
        }
    }

    #[test]
    fn charpoly_q3_both_variants() {
        assert!(verify_er_charpoly(3, ErVariant::DeletedAbsolute).unwrap());
        assert!(verify_er_charpoly(3, ErVariant::Loopless).unwrap());
        let roots = er_cubic_roots(3.0);
        assert!((roots[0] - -2.201472).abs() < 1e-4);
        assert!((roots[1] - 1.454904).abs() < 1e-4);
        assert!((roots[2] - 3.746568).abs() < 1e-4);
    }

    #[test]
    fn charpoly_rejects_wrong_q_graph() {
        // q = 6 has no field.
        assert!(matches!(
            verify_er_charpoly(6, ErVariant::Loopless),
            Err(SpectraError::Field(FieldError::NotAPrimePower(6)))
        ));
    }
}
