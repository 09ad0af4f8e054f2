//! Structural consequences of a set meeting one of the bounds with equality.
//!
//! The certificates report flags instead of asserting equivalences; the
//! equivalences themselves are checked by the test suites.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{hoffman, BoundError};
use crate::graphcore::{
    is_equitable, is_independent, membership, semiregular_bipartite, set_params, Graph, GraphError,
};
use crate::spectra::{eigenvalues, Matrix, SpectraError};

/// Tolerance on bound values and on real-valued counting identities.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Tolerance on eigenvector residual norms.
pub const RESIDUAL_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("vertex set is not independent")]
    NotIndependent,
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph has loops")]
    HasLoops,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("expected {expected} diagonal entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

fn checked_set(g: &Graph, set: &[usize]) -> Result<Vec<bool>, CertifyError> {
    let mask = membership(g.n(), set)?;
    if !is_independent(g, set) {
        return Err(CertifyError::NotIndependent);
    }
    Ok(mask)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQUALITY_TOL * (1.0 + b.abs())
}

/// Both necessary conditions for equality in the general quadratic bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GentightConditions {
    /// Every `i ∈ S` has `dᵢ = tᵢ(n/s − 1)`, plus `n/s` when `i` carries a loop.
    pub cond_a: bool,
    /// Every `i ∉ S` has exactly `(dᵢ + tᵢ)s/n` neighbours in `S`.
    pub cond_b: bool,
}

/// Evaluates both conditions; they are necessary for equality, not sufficient.
pub fn gentight_check(
    g: &Graph,
    t: &[f64],
    set: &[usize],
) -> Result<GentightConditions, CertifyError> {
    let n = g.n();
    if t.len() != n {
        return Err(CertifyError::DimensionMismatch {
            expected: n,
            got: t.len(),
        });
    }
    let mask = checked_set(g, set)?;
    let (s, nf) = (set.len() as f64, n as f64);
    let cond_a = set.iter().all(|&i| {
        let looped = if g.has_loop(i) { nf / s } else { 0.0 };
        near(g.degree(i) as f64, t[i] * (nf / s - 1.0) + looped)
    });
    let cond_b = (0..n).filter(|&i| !mask[i]).all(|i| {
        let expected = (g.degree(i) as f64 + t[i]) * s / nf;
        let count = g.neighbors(i).iter().filter(|&&u| mask[u]).count() as f64;
        near(count, expected)
    });
    Ok(GentightConditions { cond_a, cond_b })
}

fn centred_indicator(n: usize, mask: &[bool], s: usize) -> Vec<f64> {
    let shift = s as f64 / n as f64;
    mask.iter()
        .map(|&b| f64::from(u8::from(b)) - shift)
        .collect()
}

/// `‖M x − θ x‖₂`.
fn residual(m: &Matrix, x: &[f64], theta: f64) -> f64 {
    m.mul_vec(x)
        .iter()
        .zip(x)
        .map(|(y, xi)| (y - theta * xi).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoffmanCertificate {
    /// `s` equals `n(−τ)/(k − τ)`.
    pub equality: bool,
    /// Every vertex outside `S` has exactly `−τ` neighbours in `S`.
    pub semiregular: bool,
    /// `{S, V∖S}` is an equitable partition.
    pub equitable: bool,
    /// `z − (s/n)1` is a τ-eigenvector.
    pub eigvec_membership: bool,
    pub bound: f64,
    pub tau: f64,
    pub residual: f64,
}

impl HoffmanCertificate {
    pub fn all(&self) -> bool {
        self.equality && self.semiregular && self.equitable && self.eigvec_membership
    }
}

pub fn hoffman_equality_certify(
    g: &Graph,
    set: &[usize],
) -> Result<HoffmanCertificate, CertifyError> {
    if g.has_loops() {
        return Err(CertifyError::HasLoops);
    }
    let k = g.regular_degree().ok_or(CertifyError::NotRegular)?;
    let mask = checked_set(g, set)?;
    let n = g.n();
    let a = g.adjacency_matrix();
    let tau = eigenvalues(&a)?.least().unwrap_or(0.0);
    let bound = hoffman(n, k as f64, tau).value;
    let sr = semiregular_bipartite(g, set)?;
    let outside: Vec<usize> = (0..n).filter(|&v| !mask[v]).collect();
    let equitable = is_equitable(g, &[set.to_vec(), outside])?;
    let z = centred_indicator(n, &mask, set.len());
    let res = residual(&a, &z, tau);
    Ok(HoffmanCertificate {
        equality: near(set.len() as f64, bound),
        semiregular: sr.holds && near(sr.e_in as f64, -tau),
        equitable,
        eigvec_membership: res <= RESIDUAL_TOL,
        bound,
        tau,
        residual: res,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplacianCertificate {
    /// `s` equals `n(μ − d̄_S)/μ`.
    pub equality: bool,
    /// Vertices of `S` have `μ(1 − s/n)` neighbours outside, the others `μs/n` inside.
    pub semiregular: bool,
    /// `z − (s/n)1` is a μ-eigenvector of the Laplacian.
    pub eigvec_membership: bool,
    pub bound: f64,
    pub mu: f64,
    pub residual: f64,
}

impl LaplacianCertificate {
    pub fn all(&self) -> bool {
        self.equality && self.semiregular && self.eigvec_membership
    }
}

pub fn laplacian_equality_certify(
    g: &Graph,
    set: &[usize],
) -> Result<LaplacianCertificate, CertifyError> {
    if g.has_loops() {
        return Err(CertifyError::HasLoops);
    }
    let mask = checked_set(g, set)?;
    if set.is_empty() {
        return Err(GraphError::EmptySet.into());
    }
    let n = g.n();
    let l = g.laplacian();
    let mu = eigenvalues(&l)?.greatest().unwrap_or(0.0);
    let dbar = set_params(g, set)?.dbar_s_f64();
    let bound = if mu == 0.0 {
        n as f64
    } else {
        n as f64 * (mu - dbar) / mu
    };
    let frac = set.len() as f64 / n as f64;
    let sr = semiregular_bipartite(g, set)?;
    let z = centred_indicator(n, &mask, set.len());
    let res = residual(&l, &z, mu);
    Ok(LaplacianCertificate {
        equality: near(set.len() as f64, bound),
        semiregular: sr.holds
            && near(sr.e_out as f64, mu * (1.0 - frac))
            && (set.len() == n || near(sr.e_in as f64, mu * frac)),
        eigvec_membership: res <= RESIDUAL_TOL,
        bound,
        mu,
        residual: res,
    })
}

/// When the Laplacian bound is tight and `gcd(s, n) = 1`: `μ = n` and every
/// vertex of `S` is adjacent to every vertex outside `S`.
pub fn coprime_complete_bipartite_check(g: &Graph, set: &[usize]) -> Result<bool, CertifyError> {
    let cert = laplacian_equality_certify(g, set)?;
    if !cert.equality {
        return Err(CertifyError::PreconditionFailed(
            "the Laplacian bound is not attained".into(),
        ));
    }
    let (s, n) = (set.len(), g.n());
    if s.gcd(&n) != 1 {
        return Err(CertifyError::PreconditionFailed(format!(
            "gcd({s}, {n}) = {}",
            s.gcd(&n)
        )));
    }
    let mask = membership(n, set)?;
    let complete = set
        .iter()
        .all(|&u| (0..n).filter(|&v| !mask[v]).all(|v| g.is_adjacent(u, v)));
    Ok(near(cert.mu, n as f64) && complete)
}
