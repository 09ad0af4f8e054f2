//! Eigenvalue upper bounds on the size of an independent set.
//!
//! Every bound comes from the quadratic form `(z − (s/n)1)ᵀ(T + A)(z − (s/n)1) ≥ 0`
//! for a diagonal `T` with `T + A` positive semidefinite, where `z` is the
//! characteristic vector of the set. Taking `T = −τI` gives the adjacency
//! bounds, `T = μI − D` the Laplacian bounds.
//!
//! Bounds whose hypotheses fail numerically are reported with
//! `informative = false` and value `+∞`, so that taking the minimum over a
//! list of reports is always sound.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::galois::{is_prime_power, FieldError};
use crate::graphcore::{is_independent, membership, set_params, Graph, GraphError};
use crate::spectra::{eigenvalues, extremes_of, Matrix, SpectraError};

/// Least-eigenvalue threshold for accepting a matrix as positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;
/// Slack on the sign of the general quadratic.
pub const GENERAL_TOL: f64 = 1e-9;
/// Largest off-diagonal entry tolerated at non-adjacent pairs of a ratio certificate.
pub const SIGN_TOL: f64 = 1e-12;
/// Spread allowed in the row sums and diagonal of a ratio certificate.
pub const CONSTANCY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("T + A is not positive semidefinite (least eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("vertex set is not independent")]
    NotIndependent,
    #[error("{method} does not apply: {reason}")]
    Precondition { method: Method, reason: String },
    #[error("{0} needs a vertex set")]
    SetRequired(Method),
    #[error("expected a vector or matrix of order {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which bound a [`BoundReport`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Hoffman,
    Abound,
    Abound1,
    Abound2,
    Lbound,
    Lbound2,
    Sarnak,
    Sarnak2,
    RatioCert,
    /// Ratio bound on loop-free sets plus every absolute vertex.
    ErRatio,
    /// Loop-aware regular bound with all q+1 loops allowed in the set.
    ErAbound1,
    /// Absolute vertices deleted, minimum-degree estimate, plus q+1.
    ErNoAbs1,
    /// Absolute vertices deleted, edge-count estimate, maximized over loop count.
    ErNoAbs2,
    /// Loops deleted, least eigenvalue from two Newton steps.
    ErNoLoop,
    PolarityPg2,
    PolarityWq,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = serde_json::to_value(self).expect("kind serializes");
        write!(f, "{}", name.as_str().unwrap_or("?"))
    }
}

/// Inputs a bound was evaluated with; unset fields were not used.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dbar_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// `+∞` (serialized as `null`) when not informative.
    #[serde(serialize_with = "finite_or_null")]
    pub value: f64,
    pub informative: bool,
    pub preconditions_ok: bool,
    pub params: BoundParams,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

impl BoundReport {
    fn new(kind: BoundKind, params: BoundParams, preconditions_ok: bool, value: f64) -> Self {
        let informative = preconditions_ok && value.is_finite();
        BoundReport {
            kind,
            value: if informative {
                value.max(0.0)
            } else {
                f64::INFINITY
            },
            informative,
            preconditions_ok,
            params,
        }
    }

    /// Largest set size the bound allows.
    pub fn floor(&self) -> Option<u64> {
        self.informative.then(|| (self.value + 1e-9).floor() as u64)
    }
}

/// `n(−τ + √(τ² + 4 s₁ (k − τ)/n)) / (2(k − τ))`: the larger root of
/// `(k − τ)s² + nτs − n s₁ = 0`.
fn loop_quadratic_root(n: f64, k: f64, tau: f64, s1: f64) -> f64 {
    let gap = k - tau;
    n * (-tau + (tau * tau + 4.0 * s1 * gap / n).sqrt()) / (2.0 * gap)
}

/// Ratio bound `n(−τ)/(k − τ)` for k-regular loopless graphs.
pub fn hoffman(n: usize, k: f64, tau: f64) -> BoundReport {
    let params = BoundParams {
        n: Some(n),
        k: Some(k),
        tau: Some(tau),
        ..Default::default()
    };
    let ok = tau < 0.0 && k > tau;
    BoundReport::new(BoundKind::Hoffman, params, ok, n as f64 * -tau / (k - tau))
}

/// `n(−τ)/(k_S − τ)` for loopless graphs; useless when `k_S ≤ 0`.
pub fn abound(n: usize, k_s: f64, tau: f64) -> BoundReport {
    let params = BoundParams {
        n: Some(n),
        k_s: Some(k_s),
        tau: Some(tau),
        ..Default::default()
    };
    let ok = tau < 0.0 && k_s > 0.0 && k_s > tau;
    BoundReport::new(BoundKind::Abound, params, ok, n as f64 * -tau / (k_s - tau))
}

/// Regular graph with loops, `s₁` of them in the set.
pub fn abound1(n: usize, k: f64, tau: f64, s1: usize) -> BoundReport {
    let params = BoundParams {
        n: Some(n),
        k: Some(k),
        tau: Some(tau),
        s1: Some(s1),
        ..Default::default()
    };
    let ok = k > tau;
    let value = loop_quadratic_root(n as f64, k, tau, s1 as f64);
    BoundReport::new(BoundKind::Abound1, params, ok, value)
}

/// Irregular graph with loops: [`abound1`] with `k_S` in place of `k`.
pub fn abound2(n: usize, k_s: f64, tau: f64, s1: usize) -> BoundReport {
    let params = BoundParams {
        n: Some(n),
        k_s: Some(k_s),
        tau: Some(tau),
        s1: Some(s1),
        ..Default::default()
    };
    let ok = tau < 0.0 && k_s > tau;
    let value = loop_quadratic_root(n as f64, k_s, tau, s1 as f64);
    BoundReport::new(BoundKind::Abound2, params, ok, value)
}

fn laplacian_value(n: usize, mu: f64, degree: f64) -> f64 {
    if mu == 0.0 {
        n as f64
    } else {
        n as f64 * (mu - degree) / mu
    }
}

/// `n(μ − d̄_S)/μ`, μ the greatest Laplacian eigenvalue.
pub fn lbound(n: usize, mu: f64, dbar_s: f64) -> BoundReport {
    let params = BoundParams {
        n: Some(n),
        mu: Some(mu),
        dbar_s: Some(dbar_s),
        ..Default::default()
    };
    BoundReport::new(
        BoundKind::Lbound,
        params,
        mu >= 0.0,
        laplacian_value(n, mu, dbar_s),
    )
}

/// [`lbound`] with the minimum degree δ in place of `d̄_S`.
pub fn lbound2(n: usize, mu: f64, delta: f64) -> BoundReport {
    let params = BoundParams {
        n: Some(n),
        mu: Some(mu),
        delta: Some(delta),
        ..Default::default()
    };
    BoundReport::new(
        BoundKind::Lbound2,
        params,
        mu >= 0.0,
        laplacian_value(n, mu, delta),
    )
}

fn sarnak_params(n: usize, k: f64, lambda: f64) -> BoundParams {
    BoundParams {
        n: Some(n),
        k: Some(k),
        lambda: Some(lambda),
        ..Default::default()
    }
}

/// `nλ/k`, λ = max(second largest, |least|).
pub fn sarnak(n: usize, k: f64, lambda: f64) -> BoundReport {
    let ok = k > 0.0 && lambda > 0.0;
    BoundReport::new(
        BoundKind::Sarnak,
        sarnak_params(n, k, lambda),
        ok,
        n as f64 * lambda / k,
    )
}

/// `n / (1 + k/λ)`: the same argument without discarding the terms from
/// vertices outside the set.
pub fn sarnak_improved(n: usize, k: f64, lambda: f64) -> BoundReport {
    let ok = k > 0.0 && lambda > 0.0;
    let value = n as f64 / (1.0 + k / lambda);
    BoundReport::new(BoundKind::Sarnak2, sarnak_params(n, k, lambda), ok, value)
}

/// Value of the general quadratic for a given diagonal `T` and set `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralBound {
    /// `(s²/n²)Σ_V(tᵢ+dᵢ) − (2s/n)Σ_S(tᵢ+dᵢ) + Σ_S tᵢ + s₁`.
    pub lhs: f64,
    /// `lhs ≥ −GENERAL_TOL`.
    pub holds: bool,
}

pub fn general_bound(g: &Graph, t: &[f64], set: &[usize]) -> Result<GeneralBound, BoundError> {
    let n = g.n();
    if t.len() != n {
        return Err(BoundError::DimensionMismatch {
            expected: n,
            got: t.len(),
        });
    }
    membership(n, set)?;
    if !is_independent(g, set) {
        return Err(BoundError::NotIndependent);
    }
    let least = eigenvalues(&g.adjacency_matrix().add_diagonal(t))?
        .least()
        .unwrap_or(0.0);
    if least < -PSD_TOL {
        return Err(BoundError::NotPsd(least));
    }
    if set.is_empty() {
        return Ok(GeneralBound {
            lhs: 0.0,
            holds: true,
        });
    }
    let d = g.degrees();
    let weight = |i: usize| t[i] + d[i] as f64;
    let total: f64 = (0..n).map(weight).sum();
    let in_set: f64 = set.iter().map(|&i| weight(i)).sum();
    let t_set: f64 = set.iter().map(|&i| t[i]).sum();
    let s1 = set.iter().filter(|&&i| g.has_loop(i)).count() as f64;
    let (s, nf) = (set.len() as f64, n as f64);
    let lhs = s * s / (nf * nf) * total - 2.0 * s / nf * in_set + t_set + s1;
    Ok(GeneralBound {
        lhs,
        holds: lhs >= -GENERAL_TOL,
    })
}

/// The two diagonal choices that turn the general quadratic into the
/// adjacency and Laplacian bounds.
pub fn adjacency_shift(g: &Graph) -> Result<Vec<f64>, BoundError> {
    let tau = eigenvalues(&g.adjacency_matrix())?.least().unwrap_or(0.0);
    Ok(vec![-tau; g.n()])
}

/// `μ − dᵢ` with loopless degrees; requires a loopless graph for `T + A = μI − L`.
pub fn laplacian_shift(g: &Graph) -> Result<Vec<f64>, BoundError> {
    let mu = eigenvalues(&g.laplacian())?.greatest().unwrap_or(0.0);
    Ok(g.degrees().iter().map(|&d| mu - d as f64).collect())
}

/// Bound methods evaluable on a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Hoffman,
    Abound,
    Abound1,
    Abound2,
    Lbound,
    Lbound2,
    Sarnak,
    Sarnak2,
    RatioCert,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = serde_json::to_value(self).expect("method serializes");
        write!(f, "{}", name.as_str().unwrap_or("?"))
    }
}

/// Spectral and degree data of a graph, computed once and shared by every
/// bound evaluation on it.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphData {
    pub n: usize,
    /// Common degree (loops counted once), if regular.
    pub regular: Option<usize>,
    pub loops: usize,
    pub min_degree: usize,
    pub avg_degree: f64,
    /// Least adjacency eigenvalue.
    pub tau: f64,
    /// `max(second largest, |τ|)`; `None` for a single vertex.
    pub lambda: Option<f64>,
    /// Greatest Laplacian eigenvalue.
    pub mu: f64,
    pub loopless_min_degree: usize,
    pub loopless_regular: Option<usize>,
}

impl GraphData {
    pub fn compute(g: &Graph) -> Result<Self, BoundError> {
        let adj = eigenvalues(&g.adjacency_matrix())?;
        let lap = eigenvalues(&g.laplacian())?;
        let stripped = g.without_loops();
        let degrees = g.degrees();
        Ok(GraphData {
            n: g.n(),
            regular: g.regular_degree(),
            loops: g.loop_count(),
            min_degree: g.min_degree().unwrap_or(0),
            avg_degree: if g.n() == 0 {
                0.0
            } else {
                degrees.iter().sum::<usize>() as f64 / g.n() as f64
            },
            tau: adj.least().unwrap_or(0.0),
            lambda: extremes_of(&adj).ok().map(|e| e.lambda),
            mu: lap.greatest().unwrap_or(0.0),
            loopless_min_degree: stripped.min_degree().unwrap_or(0),
            loopless_regular: stripped.regular_degree(),
        })
    }
}

/// Where the set-dependent quantities come from.
#[derive(Debug, Clone, Copy)]
pub enum SetChoice<'a> {
    /// A concrete independent set.
    Set(&'a [usize]),
    /// Worst case over all sets: `d̄_S ≥ δ`, `k_S ≥ 2δ − d̄`, `s₁ ≤` total loops.
    WorstCase,
}

/// Evaluates `method` on `g`. Structural hypotheses (regularity, no loops)
/// that fail are reported as [`BoundError::Precondition`].
pub fn evaluate(
    g: &Graph,
    data: &GraphData,
    method: Method,
    choice: SetChoice<'_>,
) -> Result<BoundReport, BoundError> {
    let n = g.n();
    let need_loopless = |reason: &str| -> Result<(), BoundError> {
        if g.has_loops() {
            Err(BoundError::Precondition {
                method,
                reason: format!("graph has loops; {reason}"),
            })
        } else {
            Ok(())
        }
    };
    let need_regular = || -> Result<f64, BoundError> {
        data.regular
            .map(|k| k as f64)
            .ok_or(BoundError::Precondition {
                method,
                reason: "graph is not regular".into(),
            })
    };
    let set = match choice {
        SetChoice::Set(s) => {
            membership(n, s)?;
            if !is_independent(g, s) {
                return Err(BoundError::NotIndependent);
            }
            Some(s)
        }
        SetChoice::WorstCase => None,
    };
    // (k_S, s1) either from the set or their worst-case estimates.
    let k_s_and_s1 = || -> Result<(f64, usize), BoundError> {
        match set {
            Some(s) => {
                let p = set_params(g, s)?;
                Ok((p.k_s_f64(), p.s1))
            }
            None => Ok((2.0 * data.min_degree as f64 - data.avg_degree, data.loops)),
        }
    };
    let report = match method {
        Method::Hoffman => {
            need_loopless("the ratio bound needs a loopless graph")?;
            hoffman(n, need_regular()?, data.tau)
        }
        Method::Abound => {
            need_loopless("use abound2 for graphs with loops")?;
            abound(n, k_s_and_s1()?.0, data.tau)
        }
        Method::Abound1 => {
            let k = need_regular()?;
            let s1 = match set {
                Some(s) => s.iter().filter(|&&v| g.has_loop(v)).count(),
                None => data.loops,
            };
            abound1(n, k, data.tau, s1)
        }
        Method::Abound2 => {
            let (k_s, s1) = k_s_and_s1()?;
            abound2(n, k_s, data.tau, s1)
        }
        Method::Lbound => match set {
            Some(s) if !s.is_empty() => {
                let p = set_params(&g.without_loops(), s)?;
                lbound(n, data.mu, p.dbar_s_f64())
            }
            Some(_) => return Err(BoundError::Graph(GraphError::EmptySet)),
            None => {
                let mut r = lbound(n, data.mu, data.loopless_min_degree as f64);
                r.params.delta = r.params.dbar_s.take();
                r
            }
        },
        Method::Lbound2 => lbound2(n, data.mu, data.loopless_min_degree as f64),
        Method::Sarnak | Method::Sarnak2 => {
            need_loopless("the argument needs a loopless regular graph")?;
            let k = need_regular()?;
            let lambda = data.lambda.ok_or(BoundError::Precondition {
                method,
                reason: "needs at least two vertices".into(),
            })?;
            if method == Method::Sarnak {
                sarnak(n, k, lambda)
            } else {
                sarnak_improved(n, k, lambda)
            }
        }
        Method::RatioCert => {
            let b = g.adjacency_matrix().add_diagonal(&vec![-data.tau; n]);
            ratio_certificate(&b, g)?.report()
        }
    };
    Ok(report)
}

/// Checked conditions of a PSD ratio certificate `B` for the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCertificate {
    pub matrix: Matrix,
    /// Common diagonal entry (first diagonal entry if not constant).
    pub t: f64,
    /// Common row sum (first row sum if not constant).
    pub r: f64,
    pub psd: bool,
    /// `B_ij ≤ 0` for every pair of distinct non-adjacent vertices.
    pub sign_pattern: bool,
    pub row_sum_const: bool,
    pub diag_const: bool,
}

impl RatioCertificate {
    pub fn is_valid(&self) -> bool {
        self.psd && self.sign_pattern && self.row_sum_const && self.diag_const && self.r > 0.0
    }

    /// `n·t/r` when every condition holds.
    pub fn bound(&self) -> Option<f64> {
        self.is_valid()
            .then(|| self.matrix.n() as f64 * self.t / self.r)
    }

    pub fn report(&self) -> BoundReport {
        let params = BoundParams {
            n: Some(self.matrix.n()),
            t: Some(self.t),
            r: Some(self.r),
            ..Default::default()
        };
        BoundReport::new(
            BoundKind::RatioCert,
            params,
            self.is_valid(),
            self.bound().unwrap_or(f64::INFINITY),
        )
    }
}

pub fn ratio_certificate(b: &Matrix, g: &Graph) -> Result<RatioCertificate, BoundError> {
    let n = g.n();
    if b.n() != n {
        return Err(BoundError::DimensionMismatch {
            expected: n,
            got: b.n(),
        });
    }
    let psd = match eigenvalues(b) {
        Ok(spec) => spec.least().is_none_or(|x| x >= -PSD_TOL),
        Err(SpectraError::NotSymmetric { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    let sign_pattern =
        (0..n).all(|i| (0..n).all(|j| i == j || g.is_adjacent(i, j) || b[(i, j)] <= SIGN_TOL));
    let spread = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let rows = b.row_sums();
    let diag = b.diagonal();
    Ok(RatioCertificate {
        matrix: b.clone(),
        t: diag.first().copied().unwrap_or(0.0),
        r: rows.first().copied().unwrap_or(0.0),
        psd,
        sign_pattern,
        row_sum_const: n == 0 || spread(&rows) <= CONSTANCY_TOL,
        diag_const: n == 0 || spread(&diag) <= CONSTANCY_TOL,
    })
}

/// The five closed-form bounds on independent sets of the polarity graph
/// ER(q) (loops kept), all derived from `n = q²+q+1`, `k = q+1`, `τ = −√q`
/// and `q+1` absolute vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ErBounds {
    pub q: u64,
    pub abound1: BoundReport,
    pub noloop: BoundReport,
    pub ratio: BoundReport,
    pub noabs1: BoundReport,
    pub noabs2: BoundReport,
}

impl ErBounds {
    /// Column name and report, in table order.
    pub fn columns(&self) -> [(&'static str, &BoundReport); 5] {
        [
            ("abound1", &self.abound1),
            ("noloop", &self.noloop),
            ("ratio", &self.ratio),
            ("noabs1", &self.noabs1),
            ("noabs2", &self.noabs2),
        ]
    }
}

fn check_prime_power(q: u64) -> Result<(), FieldError> {
    if is_prime_power(q) {
        Ok(())
    } else {
        Err(FieldError::NotAPrimePower(q))
    }
}

/// Newton steps used for the loopless least eigenvalue in [`er_bounds`].
pub const ER_NEWTON_STEPS: usize = 2;

pub fn er_bounds(q: u64) -> Result<ErBounds, FieldError> {
    check_prime_power(q)?;
    let qf = q as f64;
    let root = qf.sqrt();
    let nv = q * q + q + 1;
    let n = nv as f64;
    let k = qf + 1.0;
    let base = BoundParams {
        n: Some(nv as usize),
        q: Some(q),
        ..Default::default()
    };
    let closed = |kind, params: BoundParams, value| BoundReport::new(kind, params, true, value);

    let ratio = closed(
        BoundKind::ErRatio,
        BoundParams {
            k: Some(k),
            tau: Some(-root),
            s1: Some(q as usize + 1),
            ..base.clone()
        },
        n * root / (qf + root + 1.0) + k,
    );

    let mut abound1_report = abound1(nv as usize, k, -root, q as usize + 1);
    abound1_report.kind = BoundKind::ErAbound1;
    abound1_report.params.q = Some(q);

    // ER(q) minus its absolute vertices: q² vertices, least eigenvalue −√q,
    // average degree q − 1/q, and every vertex of a set has degree ≥ q − 1.
    let noabs1 = closed(
        BoundKind::ErNoAbs1,
        BoundParams {
            n: Some((q * q) as usize),
            tau: Some(-root),
            k_s: Some(qf - 2.0 + 1.0 / qf),
            q: Some(q),
            ..Default::default()
        },
        qf * qf * root / (qf - 2.0 + 1.0 / qf + root) + k,
    );

    // Linear in s1, so the maximum over 0 ≤ s1 ≤ q+1 is at an endpoint.
    let by_loops =
        |s1: f64| (qf * qf * root + 2.0 * qf * (k - s1)) / (qf + 2.0 + 1.0 / qf + root) + s1;
    let (s1_worst, noabs2_value) = [0.0, k].into_iter().map(|s1| (s1, by_loops(s1))).fold(
        (0.0, f64::NEG_INFINITY),
        |best, cur| if cur.1 > best.1 { cur } else { best },
    );
    let noabs2 = closed(
        BoundKind::ErNoAbs2,
        BoundParams {
            n: Some((q * q) as usize),
            tau: Some(-root),
            s1: Some(s1_worst as usize),
            q: Some(q),
            ..Default::default()
        },
        noabs2_value,
    );

    // Loops deleted: d̄_S = q + 1 − s1/s, average degree (q+1)(1 − 1/n); with
    // s1 = q+1 the ratio-type bound becomes the expression below.
    let w = crate::spectra::newton_least_root(q, ER_NEWTON_STEPS);
    let noloop = closed(
        BoundKind::ErNoLoop,
        BoundParams {
            tau: Some(w),
            s1: Some(q as usize + 1),
            ..base.clone()
        },
        (n * -w + 2.0 * k) / (k - w + k / n),
    );

    Ok(ErBounds {
        q,
        abound1: abound1_report,
        noloop,
        ratio,
        noabs1,
        noabs2,
    })
}

/// Any polarity graph of PG(2,q) with `absolute` absolute points.
pub fn polarity_bound(q: u64, absolute: usize) -> Result<BoundReport, FieldError> {
    check_prime_power(q)?;
    let qf = q as f64;
    let mut r = abound1((q * q + q + 1) as usize, qf + 1.0, -qf.sqrt(), absolute);
    r.kind = BoundKind::PolarityPg2;
    r.params.q = Some(q);
    Ok(r)
}

/// Any polarity graph of the generalized quadrangle W(q): `q³+q²+q+1`
/// vertices, degree `q+1`, least eigenvalue `−√(2q)`, `q²+1` absolute points.
pub fn wq_bound(q: u64) -> Result<BoundReport, FieldError> {
    check_prime_power(q)?;
    let qf = q as f64;
    let n = (q * q * q + q * q + q + 1) as usize;
    let mut r = abound1(n, qf + 1.0, -(2.0 * qf).sqrt(), (q * q + 1) as usize);
    r.kind = BoundKind::PolarityWq;
    r.params.q = Some(q);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::geometry::{er_graph, LoopMode};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hoffman_examples() {
        assert!(close(hoffman(10, 3.0, -2.0).value, 4.0, 1e-12));
        assert!(close(hoffman(7, 6.0, -1.0).value, 1.0, 1e-12));
        let r = 3f64.sqrt();
        assert!(close(
            hoffman(13, 4.0, -r).value,
            13.0 * r / (4.0 + r),
            1e-12
        ));
        assert!(close(hoffman(13, 4.0, -r).value, 3.928, 1e-3));
        let edgeless = hoffman(5, 0.0, 0.0);
        assert!(!edgeless.informative);
        assert_eq!(edgeless.value, f64::INFINITY);
    }

    #[test]
    fn abound_examples() {
        let r = abound(27, 32.0 / 27.0, -(92f64).sqrt());
        assert!(close(r.value, 24.03, 5e-3), "{}", r.value);
        assert_eq!(r.floor(), Some(24));
        assert!(close(abound(10, 3.0, -2.0).value, 4.0, 1e-12));
        let degenerate = abound(10, 0.0, -2.0);
        assert!(!degenerate.informative);
        assert!(degenerate.value.is_infinite());
        assert!(!abound(10, -1.0, -2.0).informative);
    }

    #[test]
    fn abound1_examples() {
        let r3 = 3f64.sqrt();
        assert!(close(abound1(13, 4.0, -r3, 4).value, 5.56, 5e-3));
        let r13 = 13f64.sqrt();
        assert!(close(abound1(183, 14.0, -r13, 14).value, 41.03, 0.01));
        assert!(close(
            abound1(10, 3.0, -2.0, 0).value,
            hoffman(10, 3.0, -2.0).value,
            1e-12
        ));
    }

    #[test]
    fn abound2_reductions() {
        let (n, k, tau) = (20, 4.5, -2.3);
        assert!(close(
            abound2(n, k, tau, 3).value,
            abound1(n, k, tau, 3).value,
            1e-12
        ));
        assert!(close(
            abound2(n, k, tau, 0).value,
            abound(n, k, tau).value,
            1e-12
        ));
        assert!(!abound2(n, -3.0, tau, 1).informative);
    }

    #[test]
    fn laplacian_examples() {
        assert!(close(lbound(27, 27.0, 4.0).value, 23.0, 1e-12));
        assert!(close(lbound(7, 7.0, 5.0).value, 2.0, 1e-12));
        assert!(close(lbound2(27, 27.0, 4.0).value, 23.0, 1e-12));
        let edgeless = lbound(6, 0.0, 0.0);
        assert!(edgeless.informative);
        assert_eq!(edgeless.value, 6.0);
        // regular loopless: μ = k − τ, d̄ = k
        assert!(close(
            lbound(10, 5.0, 3.0).value,
            hoffman(10, 3.0, -2.0).value,
            1e-12
        ));
    }

    #[test]
    fn sarnak_examples() {
        assert!(close(sarnak(10, 3.0, 2.0).value, 20.0 / 3.0, 1e-12));
        assert!(close(sarnak_improved(10, 3.0, 2.0).value, 4.0, 1e-12));
        assert!(!sarnak(10, 0.0, 2.0).informative);
    }

    #[test]
    fn sarnak_improved_dominates_hoffman() {
        // nλ/(k+λ) is increasing in λ and λ ≥ −τ, so the improved bound is
        // never below the ratio bound; 2K4 makes the gap strict.
        let two_k4 = Graph::new(
            8,
            (0..4).flat_map(|i| (i + 1..4).flat_map(move |j| [(i, j), (i + 4, j + 4)])),
            [],
        )
        .unwrap();
        let data = GraphData::compute(&two_k4).unwrap();
        assert!(close(data.tau, -1.0, 1e-12));
        assert_eq!(data.lambda.map(|l| l.round()), Some(3.0));
        let h = hoffman(8, 3.0, data.tau).value;
        let s2 = sarnak_improved(8, 3.0, data.lambda.unwrap()).value;
        assert!(close(h, 2.0, 1e-12) && close(s2, 4.0, 1e-9));
        let pet = families::petersen();
        let data = GraphData::compute(&pet).unwrap();
        let lambda = data.lambda.unwrap();
        assert!(close(
            sarnak_improved(10, 3.0, lambda).value,
            hoffman(10, 3.0, data.tau).value,
            1e-9
        ));
    }

    #[test]
    fn general_bound_examples() {
        let pet = families::petersen();
        let t = vec![2.0; 10];
        let r = general_bound(&pet, &t, &[]).unwrap();
        assert!(r.holds && r.lhs == 0.0);
        // {0, 2, 8, 9} is a maximum independent set of this labelling.
        let s = [0, 2, 8, 9];
        assert!(is_independent(&pet, &s));
        let r = general_bound(&pet, &t, &s).unwrap();
        assert!(r.holds && r.lhs.abs() < 1e-9, "{}", r.lhs);
        assert_eq!(
            general_bound(&pet, &t, &[0, 1]).unwrap_err(),
            BoundError::NotIndependent
        );
        assert!(matches!(
            general_bound(&pet, &[1.0; 10], &[0]),
            Err(BoundError::NotPsd(_))
        ));
    }

    #[test]
    fn evaluate_preconditions() {
        let g = er_graph(3, LoopMode::Keep).unwrap();
        let data = GraphData::compute(&g).unwrap();
        assert!(matches!(
            evaluate(&g, &data, Method::Hoffman, SetChoice::WorstCase),
            Err(BoundError::Precondition {
                method: Method::Hoffman,
                ..
            })
        ));
        let r = evaluate(&g, &data, Method::Abound1, SetChoice::WorstCase).unwrap();
        assert!(close(r.value, 5.56, 5e-3));
        let k = families::complete_bipartite(4, 23).unwrap();
        let data = GraphData::compute(&k).unwrap();
        let side: Vec<usize> = (4..27).collect();
        let r = evaluate(&k, &data, Method::Lbound, SetChoice::Set(&side)).unwrap();
        assert!(close(r.value, 23.0, 1e-9));
        assert_eq!(
            evaluate(&k, &data, Method::Abound, SetChoice::Set(&[0, 4])).unwrap_err(),
            BoundError::NotIndependent
        );
    }

    #[test]
    fn ratio_certificate_petersen() {
        let pet = families::petersen();
        let b = pet.adjacency_matrix().add_diagonal(&[2.0; 10]);
        let cert = ratio_certificate(&b, &pet).unwrap();
        assert!(cert.is_valid());
        assert!(close(cert.t, 2.0, 1e-12) && close(cert.r, 5.0, 1e-12));
        assert!(close(cert.bound().unwrap(), 4.0, 1e-9));
    }

    #[test]
    fn ratio_certificate_all_ones() {
        for n in 2..6 {
            let ones = Matrix::from_rows(&vec![vec![1.0; n]; n]).unwrap();
            let cert = ratio_certificate(&ones, &families::complete(n)).unwrap();
            assert!(close(cert.bound().unwrap(), 1.0, 1e-12));
            let cert = ratio_certificate(&ones, &families::path(n)).unwrap();
            assert!(n == 2 || !cert.sign_pattern);
        }
    }

    #[test]
    fn er_bounds_q3() {
        let b = er_bounds(3).unwrap();
        let values: Vec<f64> = b.columns().iter().map(|(_, r)| r.value).collect();
        let printed = [5.56, 5.63, 7.92, 9.09, 6.21];
        for (v, p) in values.iter().zip(printed) {
            assert!(close(*v, p, 0.01), "{v} vs {p}");
        }
        assert_eq!(b.noabs2.params.s1, Some(4));
        assert_eq!(er_bounds(5).unwrap().noabs2.params.s1, Some(0));
        assert_eq!(er_bounds(6).unwrap_err(), FieldError::NotAPrimePower(6));
    }

    #[test]
    fn polarity_and_wq() {
        for q in [3u64, 5, 7, 9] {
            let er = er_bounds(q).unwrap();
            assert_eq!(
                polarity_bound(q, q as usize + 1).unwrap().value,
                er.abound1.value
            );
            let qf = q as f64;
            let h = hoffman((q * q + q + 1) as usize, qf + 1.0, -qf.sqrt());
            assert!(close(polarity_bound(q, 0).unwrap().value, h.value, 1e-12));
        }
        assert!(close(wq_bound(3).unwrap().value, 18.5375, 1e-4));
    }

    #[test]
    fn report_serializes_infinity_as_null() {
        let r = abound(10, 0.0, -2.0);
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["value"].is_null());
        assert_eq!(v["kind"], "abound");
        assert_eq!(v["informative"], false);
        assert_eq!(BoundKind::ErNoAbs2.to_string(), "er-no-abs2");
        assert_eq!(Method::RatioCert.to_string(), "ratio-cert");
    }
}
