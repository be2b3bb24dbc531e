//! Exact Ollivier-Ricci edge curvature: `κ(u,v) = 1 − W1(μ_u, μ_v) / d(u,v)`
//! with lazy neighbor distributions (mass `α` on the node itself, the rest
//! spread over neighbors proportionally to edge weight) and W1 solved to
//! optimality by the transportation simplex in [`crate::transport`].

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cost, Graph};
use crate::transport::{min_cost_transport, TransportError};

#[derive(Debug, Error)]
pub enum OllivierError {
    #[error("node {0} has no neighbors")]
    IsolatedNode(usize),
    #[error("alpha must be in [0, 1), got {0}")]
    BadAlpha(f64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

/// Ground metric for distances and transport costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Hop counts.
    Unit,
    /// Shortest paths under edge weights.
    Weight,
}

impl Metric {
    pub fn cost(self) -> Cost {
        match self {
            Metric::Unit => Cost::Unit,
            Metric::Weight => Cost::Weight,
        }
    }
}

/// Probability mass over a small set of nodes.
#[derive(Debug, Clone)]
pub struct DiscreteDistribution {
    support: Vec<usize>,
    mass: Vec<f64>,
}

impl DiscreteDistribution {
    /// Validates: matching lengths, unique support, non-negative masses
    /// summing to 1 within 1e-12.
    pub fn new(support: Vec<usize>, mass: Vec<f64>) -> Result<Self, OllivierError> {
        if support.len() != mass.len() {
            return Err(OllivierError::BadDistribution(
                "support and mass lengths differ".into(),
            ));
        }
        if support.is_empty() {
            return Err(OllivierError::BadDistribution("empty support".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &s in &support {
            if !seen.insert(s) {
                return Err(OllivierError::BadDistribution(format!(
                    "duplicate support node {s}"
                )));
            }
        }
        if mass.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(OllivierError::BadDistribution("negative mass".into()));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(OllivierError::BadDistribution(format!(
                "mass sums to {total}, expected 1"
            )));
        }
        Ok(DiscreteDistribution { support, mass })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }
}

/// Lazy random-walk distribution of node `x`: mass `alpha` at `x`, mass
/// `(1-alpha)·c_xj/a_x` at each neighbor `j`. With `alpha = 0` there is no
/// self-mass and the support is the neighbor set alone.
pub fn neighbor_distribution(
    g: &Graph,
    x: usize,
    alpha: f64,
) -> Result<DiscreteDistribution, OllivierError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(OllivierError::BadAlpha(alpha));
    }
    let neighbors = g.neighbors(x);
    if neighbors.is_empty() {
        return Err(OllivierError::IsolatedNode(x));
    }
    let a_x: f64 = neighbors.iter().map(|&(_, w)| w).sum();
    let mut support = Vec::with_capacity(neighbors.len() + 1);
    let mut mass = Vec::with_capacity(neighbors.len() + 1);
    if alpha > 0.0 {
        support.push(x);
        mass.push(alpha);
    }
    for &(j, w) in neighbors {
        support.push(j);
        mass.push((1.0 - alpha) * w / a_x);
    }
    DiscreteDistribution::new(support, mass)
}

/// Exact Wasserstein-1 between two discrete distributions under a caller
/// supplied ground distance.
pub fn wasserstein1(
    mu: &DiscreteDistribution,
    nu: &DiscreteDistribution,
    ground: impl Fn(usize, usize) -> f64,
) -> Result<f64, OllivierError> {
    let m = mu.support.len();
    let n = nu.support.len();
    let mut cost = vec![0.0; m * n];
    for (a, &x) in mu.support.iter().enumerate() {
        for (b, &y) in nu.support.iter().enumerate() {
            cost[a * n + b] = ground(x, y);
        }
    }
    Ok(min_cost_transport(&mu.mass, &nu.mass, &cost)?.cost)
}

/// Per-edge Ollivier-Ricci curvature of a connected graph.
#[derive(Debug, Clone)]
pub struct OrCurvature {
    /// κ per edge, aligned with `Graph::edges()`.
    pub kappa: Vec<f64>,
    /// W1 value per edge.
    pub w1: Vec<f64>,
    pub alpha: f64,
    pub metric: Metric,
}

/// Compute κ for every edge. Ground distances are computed lazily per edge
/// by shortest-path sweeps from the support of the first endpoint; edges are
/// processed in parallel and results keep edge order.
pub fn or_curvature(g: &Graph, alpha: f64, metric: Metric) -> Result<OrCurvature, OllivierError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(OllivierError::BadAlpha(alpha));
    }
    if !g.is_connected() {
        return Err(OllivierError::Disconnected);
    }
    let cost = metric.cost();
    let results: Result<Vec<(f64, f64)>, OllivierError> = g
        .edges()
        .par_iter()
        .map(|e| {
            let mu = neighbor_distribution(g, e.u, alpha)?;
            let nu = neighbor_distribution(g, e.v, alpha)?;
            // one sweep per support node of μ, plus one from u for d(u, v)
            let mut dist_rows: Vec<(usize, Vec<f64>)> = Vec::with_capacity(mu.support().len() + 1);
            for &a in mu.support() {
                dist_rows.push((a, g.shortest_path_distances(a, cost)));
            }
            let d_uv = match dist_rows.iter().find(|(a, _)| *a == e.u) {
                Some((_, row)) => row[e.v],
                None => g.shortest_path_distances(e.u, cost)[e.v],
            };
            let lookup = |x: usize, y: usize| {
                let row = &dist_rows.iter().find(|(a, _)| *a == x).unwrap().1;
                row[y]
            };
            let w1 = wasserstein1(&mu, &nu, lookup)?;
            Ok((w1, 1.0 - w1 / d_uv))
        })
        .collect();
    let results = results?;
    Ok(OrCurvature {
        w1: results.iter().map(|r| r.0).collect(),
        kappa: results.iter().map(|r| r.1).collect(),
        alpha,
        metric,
    })
}

#[derive(Debug, Serialize)]
pub struct OrEdgeEntry {
    pub u: usize,
    pub v: usize,
    pub w: f64,
    pub w1: f64,
    pub kappa: f64,
}

/// JSON-facing view mirroring the resistance report.
#[derive(Debug, Serialize)]
pub struct OrReport {
    pub alpha: f64,
    pub metric: Metric,
    pub edges: Vec<OrEdgeEntry>,
}

impl OrCurvature {
    pub fn report(&self, g: &Graph) -> OrReport {
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(idx, e)| OrEdgeEntry {
                u: e.u,
                v: e.v,
                w: e.w,
                w1: self.w1[idx],
                kappa: self.kappa[idx],
            })
            .collect();
        OrReport {
            alpha: self.alpha,
            metric: self.metric,
            edges,
        }
    }
}
