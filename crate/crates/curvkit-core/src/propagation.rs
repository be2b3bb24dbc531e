//! Curvature-aware aggregation operator and curvature-based edge
//! reweighting — the deterministic, learning-free pieces of GNN integration.
//!
//! The operator is `τ = G ⊙ (D⁻¹ĉ)` with `ĉ = c + I` (unit self-loops),
//! `D_ii = Σ_j ĉ_ij`, and `G` carrying `g(k_ij)` on edge positions and 1 on
//! the diagonal. With `g ≡ 1` it reduces exactly to the row-stochastic
//! `D⁻¹ĉ`.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum PropagationError {
    #[error("curvature vector has {got} entries, graph has {want} edges")]
    MisalignedCurvature { got: usize, want: usize },
    #[error("feature matrix has {got} rows, graph has {want} nodes")]
    ShapeMismatch { got: usize, want: usize },
    #[error("edge weight transform produced a non-finite value for k = {0}")]
    NonFiniteTransform(f64),
    #[error("propagation needs at least one step")]
    ZeroSteps,
}

/// Elementwise transform applied to edge curvature to form the weight
/// penalty `g(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GSpec {
    /// `g(k) = k`
    Identity,
    /// `g(k) = a·k + b`
    Linear { a: f64, b: f64 },
    /// `g(k) = exp(k)`
    Exp,
    /// `g(k) = clamp(a·k + b, lo, hi)`
    ClampLinear { a: f64, b: f64, lo: f64, hi: f64 },
}

impl GSpec {
    /// The constant-one transform, which makes the operator exactly `D⁻¹ĉ`.
    pub const ONE: GSpec = GSpec::Linear { a: 0.0, b: 1.0 };

    pub fn apply(self, k: f64) -> f64 {
        match self {
            GSpec::Identity => k,
            GSpec::Linear { a, b } => a * k + b,
            GSpec::Exp => k.exp(),
            GSpec::ClampLinear { a, b, lo, hi } => (a * k + b).clamp(lo, hi),
        }
    }
}

/// Build the curvature-weighted aggregation operator τ (n×n, generally not
/// symmetric because of the row normalization).
pub fn aggregation_operator(
    g: &Graph,
    curvature: &[f64],
    gspec: GSpec,
) -> Result<DMatrix<f64>, PropagationError> {
    if curvature.len() != g.edge_count() {
        return Err(PropagationError::MisalignedCurvature {
            got: curvature.len(),
            want: g.edge_count(),
        });
    }
    let n = g.n();
    // ĉ = c + I, D from ĉ, G on edge positions (diagonal fixed at 1: the
    // curvature of a self-loop is left undefined upstream)
    let mut tau = DMatrix::zeros(n, n);
    let mut d = vec![1.0; n];
    for e in g.edges() {
        d[e.u] += e.w;
        d[e.v] += e.w;
    }
    for (e, &k) in g.edges().iter().zip(curvature) {
        let gk = gspec.apply(k);
        if !gk.is_finite() {
            return Err(PropagationError::NonFiniteTransform(k));
        }
        tau[(e.u, e.v)] = gk * e.w / d[e.u];
        tau[(e.v, e.u)] = gk * e.w / d[e.v];
    }
    for i in 0..n {
        tau[(i, i)] = 1.0 / d[i];
    }
    Ok(tau)
}

/// Apply `X ← τX` for `steps ≥ 1` rounds.
pub fn propagate(
    tau: &DMatrix<f64>,
    features: &DMatrix<f64>,
    steps: usize,
) -> Result<DMatrix<f64>, PropagationError> {
    if steps == 0 {
        return Err(PropagationError::ZeroSteps);
    }
    if tau.ncols() != features.nrows() {
        return Err(PropagationError::ShapeMismatch {
            got: features.nrows(),
            want: tau.ncols(),
        });
    }
    let mut x = features.clone();
    for _ in 0..steps {
        x = tau * x;
    }
    Ok(x)
}

/// Curvature intervention on edge weights: `w ← w·(1 − η·k)`, floored at
/// 1e-6 so the result stays a valid positive-weight graph.
pub fn pool_reweight(g: &Graph, curvature: &[f64], eta: f64) -> Result<Graph, PropagationError> {
    if curvature.len() != g.edge_count() {
        return Err(PropagationError::MisalignedCurvature {
            got: curvature.len(),
            want: g.edge_count(),
        });
    }
    assert!((0.0..=1.0).contains(&eta), "eta must be in [0, 1]");
    let weights: Vec<f64> = g
        .edges()
        .iter()
        .zip(curvature)
        .map(|(e, &k)| (e.w * (1.0 - eta * k)).max(1e-6))
        .collect();
    Ok(g.with_weights(&weights).expect("topology unchanged"))
}
