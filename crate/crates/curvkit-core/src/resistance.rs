//! Effective resistance and resistance curvature.
//!
//! The resistance of an edge is `w_ij = (e_i - e_j)ᵀ L̄⁻¹ (e_i - e_j)` with
//! `L̄ = L + εI` the perturbed Laplacian; node curvature is
//! `p_i = 1 - (1/2) Σ_{j~i} c_ij w_ij`, edge curvature
//! `k_ij = 2(p_i + p_j) / w_ij`, and the normalized form is
//! `k̄ = k · w_min / 2` (bounded above by 1).
//!
//! Two solver routes produce the same resistances: a dense SPD inverse of the
//! perturbed Laplacian (`full-matrix`), and an independent conjugate-gradient
//! solve per edge (`per-edge-solve`).

use faer::linalg::solvers::DenseSolveCore;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::matrix::SymMatrix;

#[derive(Debug, Error)]
pub enum ResistanceError {
    #[error("factorization failed: perturbed Laplacian is not positive definite")]
    Factorization,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("conjugate-gradient solve did not converge for edge ({0}, {1})")]
    Convergence(usize, usize),
}

/// Which resistance solver to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Dense inversion for n ≤ 4000, per-edge conjugate gradient above.
    Auto,
    /// Dense `(L+εI)⁻¹`, also yields the all-pairs matrix.
    FullMatrix,
    /// Independent iterative solve per edge; no all-pairs matrix.
    PerEdge,
}

/// Dense-inversion cutoff for [`SolveMode::Auto`]: memory for the all-pairs
/// matrix is the binding constraint above this.
pub const AUTO_DENSE_LIMIT: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverTag {
    PerturbedInverse,
    PseudoinverseOracle,
}

/// Full resistance-curvature bundle for one connected graph.
#[derive(Debug, Clone)]
pub struct ResistanceCurvature {
    /// Per-edge effective resistance, aligned with `Graph::edges()`.
    pub resistance: Vec<f64>,
    /// Node curvature `p_i`.
    pub node_curvature: Vec<f64>,
    /// Edge curvature `k_ij = 2(p_i + p_j)/w_ij`.
    pub edge_curvature: Vec<f64>,
    /// Normalized curvature `k̄ = k · w_min / 2`.
    pub normalized_curvature: Vec<f64>,
    /// Perturbation actually used (0 for an edgeless single node).
    pub epsilon: f64,
    /// Smallest edge resistance (0 when the graph has no edges).
    pub w_min: f64,
    pub solver: SolverTag,
}

/// Default perturbation: `1e-8 ·` mean weighted degree, so the conditioning
/// shift stays proportional to the spectrum.
pub fn default_epsilon(g: &Graph) -> f64 {
    let degrees = g.weighted_degrees();
    1e-8 * degrees.iter().sum::<f64>() / g.n() as f64
}

/// `(L + εI)⁻¹` by Cholesky (LLT) factorization.
pub fn perturbed_inverse(l: &SymMatrix, epsilon: f64) -> Result<SymMatrix, ResistanceError> {
    assert!(epsilon > 0.0, "perturbation must be positive");
    let n = l.order();
    let perturbed = faer::Mat::from_fn(n, n, |i, j| {
        l[(i, j)] + if i == j { epsilon } else { 0.0 }
    });
    let llt = perturbed
        .llt(faer::Side::Lower)
        .map_err(|_| ResistanceError::Factorization)?;
    let inv = llt.inverse();
    let out = nalgebra::DMatrix::from_fn(n, n, |i, j| inv[(i, j)]);
    Ok(SymMatrix::symmetrized(out))
}

/// Per-edge resistances, plus the all-pairs matrix in full-matrix mode.
#[derive(Debug, Clone)]
pub struct EffectiveResistance {
    pub per_edge: Vec<f64>,
    pub omega: Option<SymMatrix>,
}

pub fn effective_resistance(
    g: &Graph,
    epsilon: f64,
    mode: SolveMode,
) -> Result<EffectiveResistance, ResistanceError> {
    if !g.is_connected() {
        return Err(ResistanceError::Disconnected);
    }
    let mode = match mode {
        SolveMode::Auto if g.n() <= AUTO_DENSE_LIMIT => SolveMode::FullMatrix,
        SolveMode::Auto => SolveMode::PerEdge,
        m => m,
    };
    match mode {
        SolveMode::FullMatrix => {
            let inv = perturbed_inverse(&g.laplacian(), epsilon)?;
            let per_edge = g
                .edges()
                .iter()
                .map(|e| inv[(e.u, e.u)] + inv[(e.v, e.v)] - 2.0 * inv[(e.u, e.v)])
                .collect();
            let n = g.n();
            let mut omega = nalgebra::DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    omega[(i, j)] = inv[(i, i)] + inv[(j, j)] - 2.0 * inv[(i, j)];
                }
            }
            Ok(EffectiveResistance {
                per_edge,
                omega: Some(SymMatrix::new_unchecked(omega)),
            })
        }
        SolveMode::PerEdge => {
            let per_edge: Result<Vec<f64>, ResistanceError> = g
                .edges()
                .par_iter()
                .map(|e| cg_edge_resistance(g, epsilon, e.u, e.v))
                .collect();
            Ok(EffectiveResistance { per_edge: per_edge?, omega: None })
        }
        SolveMode::Auto => unreachable!(),
    }
}

/// Solve `(L + εI) x = e_u - e_v` by conjugate gradients and return
/// `x_u - x_v`. The right-hand side is orthogonal to the all-ones vector, so
/// the iteration converges at the rate of the connected spectrum rather
/// than `1/ε`.
fn cg_edge_resistance(g: &Graph, epsilon: f64, u: usize, v: usize) -> Result<f64, ResistanceError> {
    let n = g.n();
    let degrees = g.weighted_degrees();
    let matvec = |x: &[f64], y: &mut [f64]| {
        for i in 0..n {
            let mut acc = (degrees[i] + epsilon) * x[i];
            for &(j, w) in g.neighbors(i) {
                acc -= w * x[j];
            }
            y[i] = acc;
        }
    };

    let mut x = vec![0.0; n];
    let mut r = vec![0.0; n];
    r[u] = 1.0;
    r[v] = -1.0;
    let b_norm_sq = 2.0;
    let tol_sq = 1e-24 * b_norm_sq; // drive well below the 1e-10 contract
    let accept_sq = 1e-20 * b_norm_sq;

    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rs = b_norm_sq;
    let max_iter = 40 * n + 200;
    for _ in 0..max_iter {
        if rs <= tol_sq {
            return Ok(x[u] - x[v]);
        }
        matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new: f64 = r.iter().map(|a| a * a).sum();
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if rs <= accept_sq {
        Ok(x[u] - x[v])
    } else {
        Err(ResistanceError::Convergence(u, v))
    }
}

/// Node curvature `p_i = 1 - (1/2) Σ_{j~i} c_ij w_ij` with `w` aligned to
/// the graph's edge order.
pub fn node_curvature(g: &Graph, resistances: &[f64]) -> Vec<f64> {
    assert_eq!(resistances.len(), g.edge_count(), "misaligned resistances");
    let mut p = vec![1.0; g.n()];
    for (e, &w) in g.edges().iter().zip(resistances) {
        p[e.u] -= 0.5 * e.w * w;
        p[e.v] -= 0.5 * e.w * w;
    }
    p
}

/// Edge curvature `k_ij = 2(p_i + p_j) / w_ij`.
pub fn edge_curvature(g: &Graph, resistances: &[f64], node_curv: &[f64]) -> Vec<f64> {
    assert_eq!(resistances.len(), g.edge_count(), "misaligned resistances");
    assert_eq!(node_curv.len(), g.n(), "misaligned node curvature");
    g.edges()
        .iter()
        .zip(resistances)
        .map(|(e, &w)| 2.0 * (node_curv[e.u] + node_curv[e.v]) / w)
        .collect()
}

/// Normalized curvature `k̄ = k · w_min / 2`.
pub fn normalize_curvature(edge_curv: &[f64], w_min: f64) -> Vec<f64> {
    edge_curv.iter().map(|k| k * w_min / 2.0).collect()
}

/// End-to-end resistance curvature of a connected graph. `epsilon = None`
/// uses [`default_epsilon`].
pub fn resistance_curvature(
    g: &Graph,
    epsilon: Option<f64>,
    mode: SolveMode,
) -> Result<ResistanceCurvature, ResistanceError> {
    if !g.is_connected() {
        return Err(ResistanceError::Disconnected);
    }
    if g.edge_count() == 0 {
        // single node: p = (1), no edges
        return Ok(ResistanceCurvature {
            resistance: vec![],
            node_curvature: vec![1.0],
            edge_curvature: vec![],
            normalized_curvature: vec![],
            epsilon: 0.0,
            w_min: 0.0,
            solver: SolverTag::PerturbedInverse,
        });
    }
    let epsilon = epsilon.unwrap_or_else(|| default_epsilon(g));
    let er = effective_resistance(g, epsilon, mode)?;
    Ok(curvature_from_resistances(
        g,
        er.per_edge,
        epsilon,
        SolverTag::PerturbedInverse,
    ))
}

/// Assemble the curvature bundle from already-computed per-edge resistances
/// (used both by the fast path and by oracle-backed comparisons).
pub fn curvature_from_resistances(
    g: &Graph,
    resistances: Vec<f64>,
    epsilon: f64,
    solver: SolverTag,
) -> ResistanceCurvature {
    let p = node_curvature(g, &resistances);
    let k = edge_curvature(g, &resistances, &p);
    let w_min = resistances.iter().copied().fold(f64::INFINITY, f64::min);
    let w_min = if w_min.is_finite() { w_min } else { 0.0 };
    let k_norm = normalize_curvature(&k, w_min);
    ResistanceCurvature {
        resistance: resistances,
        node_curvature: p,
        edge_curvature: k,
        normalized_curvature: k_norm,
        epsilon,
        w_min,
        solver,
    }
}

#[derive(Debug, Serialize)]
pub struct ResistanceNodeEntry {
    pub id: usize,
    pub p: f64,
}

#[derive(Debug, Serialize)]
pub struct ResistanceEdgeEntry {
    pub u: usize,
    pub v: usize,
    pub w: f64,
    pub resistance: f64,
    pub k: f64,
    pub k_norm: f64,
}

/// JSON-facing view: `{"epsilon", "w_min", "nodes":[{id,p}], "edges":[...]}`.
#[derive(Debug, Serialize)]
pub struct ResistanceReport {
    pub epsilon: f64,
    pub w_min: f64,
    pub nodes: Vec<ResistanceNodeEntry>,
    pub edges: Vec<ResistanceEdgeEntry>,
}

impl ResistanceCurvature {
    pub fn report(&self, g: &Graph) -> ResistanceReport {
        let nodes = self
            .node_curvature
            .iter()
            .enumerate()
            .map(|(id, &p)| ResistanceNodeEntry { id, p })
            .collect();
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(idx, e)| ResistanceEdgeEntry {
                u: e.u,
                v: e.v,
                w: e.w,
                resistance: self.resistance[idx],
                k: self.edge_curvature[idx],
                k_norm: self.normalized_curvature[idx],
            })
            .collect();
        ResistanceReport {
            epsilon: self.epsilon,
            w_min: self.w_min,
            nodes,
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;
    use approx::assert_abs_diff_eq;

    fn k2() -> Graph {
        load_edge_list("0 1").unwrap()
    }

    fn k3() -> Graph {
        load_edge_list("0 1\n1 2\n0 2").unwrap()
    }

    fn p3() -> Graph {
        load_edge_list("0 1\n1 2").unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j, 1.0));
            }
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn perturbed_inverse_scalar_and_k2() {
        // n = 1, L = 0: (0 + 0.5)⁻¹ = 2
        let l = SymMatrix::zeros(1);
        let inv = perturbed_inverse(&l, 0.5).unwrap();
        assert_abs_diff_eq!(inv[(0, 0)], 2.0, epsilon = 1e-12);

        // K_2 with ε = 1: inverse of [[2,-1],[-1,2]] is (1/3)[[2,1],[1,2]]
        let inv = perturbed_inverse(&k2().laplacian(), 1.0).unwrap();
        assert_abs_diff_eq!(inv[(0, 0)], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inv[(0, 1)], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn perturbed_inverse_is_an_inverse() {
        let g = load_edge_list("0 1\n1 2\n2 3\n0 3\n1 3 2.5").unwrap();
        let l = g.laplacian();
        let eps = 1e-8;
        let inv = perturbed_inverse(&l, eps).unwrap();
        let n = l.order();
        let mut lbar = l.matrix().clone();
        for i in 0..n {
            lbar[(i, i)] += eps;
        }
        let product = lbar * inv.matrix();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((product[(i, j)] - want).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn resistance_golden_small_graphs() {
        let eps = 1e-9;
        let er = effective_resistance(&k2(), eps, SolveMode::FullMatrix).unwrap();
        assert_abs_diff_eq!(er.per_edge[0], 1.0, epsilon = 1e-6);

        let er = effective_resistance(&p3(), eps, SolveMode::FullMatrix).unwrap();
        let omega = er.omega.unwrap();
        assert_abs_diff_eq!(omega[(0, 2)], 2.0, epsilon = 1e-6);

        let er = effective_resistance(&k3(), eps, SolveMode::FullMatrix).unwrap();
        for &w in &er.per_edge {
            assert_abs_diff_eq!(w, 2.0 / 3.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn complete_graph_resistance_matches_oracle() {
        for n in 2..=12 {
            let g = complete(n);
            let er = effective_resistance(&g, default_epsilon(&g), SolveMode::Auto).unwrap();
            let oracle = crate::oracles::pseudoinverse_resistance(&g).unwrap();
            for (e, &w) in g.edges().iter().zip(&er.per_edge) {
                assert_abs_diff_eq!(w, 2.0 / n as f64, epsilon = 1e-7);
                assert_abs_diff_eq!(w, oracle.omega[(e.u, e.v)], epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn curvature_golden_values() {
        let rc = resistance_curvature(&k2(), None, SolveMode::Auto).unwrap();
        assert_abs_diff_eq!(rc.node_curvature[0], 0.5, epsilon = 1e-7);
        assert_abs_diff_eq!(rc.edge_curvature[0], 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(rc.normalized_curvature[0], 1.0, epsilon = 1e-6);

        let rc = resistance_curvature(&p3(), None, SolveMode::Auto).unwrap();
        assert_abs_diff_eq!(rc.node_curvature[0], 0.5, epsilon = 1e-7);
        assert_abs_diff_eq!(rc.node_curvature[1], 0.0, epsilon = 1e-7);
        for &k in &rc.edge_curvature {
            assert_abs_diff_eq!(k, 1.0, epsilon = 1e-6);
        }
        for &kb in &rc.normalized_curvature {
            assert_abs_diff_eq!(kb, 0.5, epsilon = 1e-6);
        }

        let rc = resistance_curvature(&k3(), None, SolveMode::Auto).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(rc.node_curvature[i], 1.0 / 3.0, epsilon = 1e-7);
        }
        for idx in 0..3 {
            assert_abs_diff_eq!(rc.edge_curvature[idx], 2.0, epsilon = 1e-6);
            assert_abs_diff_eq!(rc.normalized_curvature[idx], 2.0 / 3.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn solver_modes_agree() {
        let g = load_edge_list("0 1\n1 2\n2 3\n3 4\n4 0\n0 2 0.5\n1 3 2").unwrap();
        let eps = default_epsilon(&g);
        let full = effective_resistance(&g, eps, SolveMode::FullMatrix).unwrap();
        let iter = effective_resistance(&g, eps, SolveMode::PerEdge).unwrap();
        for (a, b) in full.per_edge.iter().zip(&iter.per_edge) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(
            resistance_curvature(&g, None, SolveMode::Auto),
            Err(ResistanceError::Disconnected)
        ));
    }

    #[test]
    fn single_node_degenerate() {
        let g = Graph::new(1, vec![]).unwrap();
        let rc = resistance_curvature(&g, None, SolveMode::Auto).unwrap();
        assert_eq!(rc.node_curvature, vec![1.0]);
        assert!(rc.resistance.is_empty());
        assert!(rc.normalized_curvature.is_empty());
    }

    #[test]
    fn star_respects_prop5_lower_bound() {
        // star with 4 leaves: center degree 4, leaf degree 1
        let g = load_edge_list("0 1\n0 2\n0 3\n0 4").unwrap();
        let rc = resistance_curvature(&g, None, SolveMode::Auto).unwrap();
        for &kb in &rc.normalized_curvature {
            assert!(kb >= (4.0 - 4.0 - 1.0) / 2.0 - 1e-9);
            assert!(kb <= 1.0 + 1e-9);
        }
    }
}
