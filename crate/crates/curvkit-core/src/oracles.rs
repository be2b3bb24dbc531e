//! Slow, independent reference computations: spectral pseudoinverse
//! resistance, matrix-exponential diffusion, the diffusion-limit curvature
//! checker, and a brute-force W1 solver.
//!
//! Everything here is deliberately simple and O(n³)-ish, capped at n ≤ 500.
//! The fast paths in `resistance` and `ollivier` are validated against these
//! routines; nothing here shares solver code with them.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::graph::Graph;
use crate::matrix::SymMatrix;
use crate::ollivier::DiscreteDistribution;
use crate::transport::TransportError;

/// Oracle-scale cap: spectral routines refuse larger inputs.
pub const MAX_ORACLE_NODES: usize = 500;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("Laplacian has {0} near-zero eigenvalues (disconnected graph)")]
    MultipleZeroEigenvalues(usize),
    #[error("graph has {0} nodes, oracle is capped at {MAX_ORACLE_NODES}")]
    ScaleExceeded(usize),
    #[error("edge index {0} out of range")]
    BadEdge(usize),
}

/// Eigendecomposition with eigenvalues ascending and orthonormal columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Reconstruct `U diag(f(λ)) Uᵀ`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            let s = f(self.eigenvalues[k]);
            for x in col.iter_mut() {
                *x *= s;
            }
        }
        SymMatrix::symmetrized(&scaled * self.vectors.transpose())
    }
}

/// Symmetric eigendecomposition, eigenvalues sorted ascending.
pub fn eigendecompose(m: &SymMatrix) -> EigenDecomposition {
    let eig = nalgebra::linalg::SymmetricEigen::new(m.matrix().clone());
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    EigenDecomposition { eigenvalues, vectors }
}

/// Pseudoinverse of the Laplacian together with the all-pairs effective
/// resistance matrix `Ω_ij = L†_ii + L†_jj - 2 L†_ij`.
#[derive(Debug, Clone)]
pub struct PseudoinverseResistance {
    pub l_pinv: SymMatrix,
    pub omega: SymMatrix,
}

/// Spectral pseudoinverse resistance: drop the single zero eigenvalue
/// (threshold `1e-9·λ_max`), invert the rest. Errors with
/// [`OracleError::MultipleZeroEigenvalues`] on disconnected input.
pub fn pseudoinverse_resistance(g: &Graph) -> Result<PseudoinverseResistance, OracleError> {
    let n = g.n();
    if n > MAX_ORACLE_NODES {
        return Err(OracleError::ScaleExceeded(n));
    }
    let eig = eigendecompose(&g.laplacian());
    let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let thresh = 1e-9 * lambda_max;
    let zero_count = eig.eigenvalues.iter().filter(|l| l.abs() <= thresh).count();
    if zero_count != 1 && n > 1 {
        return Err(OracleError::MultipleZeroEigenvalues(zero_count));
    }
    let l_pinv = eig.apply_spectral(|l| if l.abs() <= thresh { 0.0 } else { 1.0 / l });
    let omega = omega_from_pinv(&l_pinv);
    Ok(PseudoinverseResistance { l_pinv, omega })
}

fn omega_from_pinv(l_pinv: &SymMatrix) -> SymMatrix {
    let n = l_pinv.order();
    let mut omega = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            omega[(i, j)] = l_pinv[(i, i)] + l_pinv[(j, j)] - 2.0 * l_pinv[(i, j)];
        }
    }
    SymMatrix::new_unchecked(omega)
}

/// Nullspace diagnostics of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct NullspaceReport {
    /// Eigenvalues with `|λ| ≤ 1e-9·λ_max`.
    pub zero_count: usize,
    /// Norm of the projection of `1/√n` onto the near-null eigenspace; equals
    /// `|cos|` against the single null vector of a connected Laplacian.
    pub ones_alignment: f64,
}

pub fn nullspace_check(l: &SymMatrix) -> NullspaceReport {
    let eig = eigendecompose(l);
    let n = eig.order();
    let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let thresh = 1e-9 * lambda_max;
    let ones = DMatrix::from_element(n, 1, 1.0 / (n as f64).sqrt());
    let mut zero_count = 0;
    let mut proj_sq = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= thresh {
            zero_count += 1;
            let c = (eig.vectors.column(k).transpose() * &ones)[(0, 0)];
            proj_sq += c * c;
        }
    }
    NullspaceReport { zero_count, ones_alignment: proj_sq.sqrt() }
}

/// `exp(-M t)` via the spectral form `U exp(-Λ t) Uᵀ`.
pub fn matrix_exponential(m: &SymMatrix, t: f64) -> SymMatrix {
    assert!(t >= 0.0, "diffusion time must be non-negative");
    eigendecompose(m).apply_spectral(|l| (-l * t).exp())
}

/// Expected diffusion distance `e_iᵀ exp(-Lt) Ω exp(-Lt) e_j` with the
/// generator fixed to the graph Laplacian and Ω from the spectral oracle.
pub fn expected_pair_distance(g: &Graph, i: usize, j: usize, t: f64) -> Result<f64, OracleError> {
    let pinv = pseudoinverse_resistance(g)?;
    let heat = matrix_exponential(&g.laplacian(), t);
    Ok(pair_distance_with(&heat, &pinv.omega, i, j))
}

fn pair_distance_with(heat: &SymMatrix, omega: &SymMatrix, i: usize, j: usize) -> f64 {
    let n = heat.order();
    // row i of exp(-Lt) times Omega times column j of exp(-Lt)
    let mut acc = 0.0;
    for a in 0..n {
        let mut inner = 0.0;
        for b in 0..n {
            inner += omega[(a, b)] * heat[(b, j)];
        }
        acc += heat[(i, a)] * inner;
    }
    acc
}

/// Convergence report for the diffusion limit form of edge curvature:
/// `(1/t)(1 - E(w_{N_t M_t}) / w_ij) → k_ij` as `t → 0`.
#[derive(Debug, Clone)]
pub struct Prop4Report {
    /// Edge curvature from the oracle resistances (the limit target).
    pub k_ij: f64,
    /// `(t, |estimate(t) - k_ij|)` in the order given.
    pub errors: Vec<(f64, f64)>,
    /// `(t, estimate(t))` in the order given.
    pub estimates: Vec<(f64, f64)>,
    /// Least-squares slope of `ln err` against `ln t` (≈ 1 for a linear
    /// remainder term).
    pub fitted_order: f64,
}

/// Evaluate the diffusion-limit estimate of the curvature of `g.edges()[edge]`
/// on a strictly decreasing sequence of diffusion times.
pub fn prop4_limit_check(g: &Graph, edge: usize, ts: &[f64]) -> Result<Prop4Report, OracleError> {
    let e = *g.edges().get(edge).ok_or(OracleError::BadEdge(edge))?;
    assert!(
        ts.windows(2).all(|w| w[0] > w[1]) && ts.iter().all(|&t| t > 0.0),
        "t sequence must be strictly decreasing and positive"
    );
    let pinv = pseudoinverse_resistance(g)?;
    let resistances: Vec<f64> = g.edges().iter().map(|e| pinv.omega[(e.u, e.v)]).collect();
    let p = crate::resistance::node_curvature(g, &resistances);
    let k = crate::resistance::edge_curvature(g, &resistances, &p);
    let k_ij = k[edge];
    let w_ij = resistances[edge];

    let lap = g.laplacian();
    let mut errors = Vec::with_capacity(ts.len());
    let mut estimates = Vec::with_capacity(ts.len());
    for &t in ts {
        let heat = matrix_exponential(&lap, t);
        let expected = pair_distance_with(&heat, &pinv.omega, e.u, e.v);
        let estimate = (1.0 - expected / w_ij) / t;
        estimates.push((t, estimate));
        errors.push((t, (estimate - k_ij).abs()));
    }
    Ok(Prop4Report {
        k_ij,
        fitted_order: log_log_slope(&errors),
        errors,
        estimates,
    })
}

/// Least-squares slope of ln(y) vs ln(x); pairs with y = 0 are skipped.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return f64::NAN;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Exact W1 by a dense two-phase simplex on the transportation LP. Entirely
/// independent of the network-simplex solver in [`crate::transport`]; meant
/// for supports up to ~6×6.
pub fn brute_force_w1(
    mu: &DiscreteDistribution,
    nu: &DiscreteDistribution,
    ground: impl Fn(usize, usize) -> f64,
) -> Result<f64, TransportError> {
    let m = mu.support().len();
    let n = nu.support().len();
    let mut cost = vec![0.0; m * n];
    let mut finite_max = 0.0f64;
    let mut has_inf = false;
    for (a, &x) in mu.support().iter().enumerate() {
        for (b, &y) in nu.support().iter().enumerate() {
            let d = ground(x, y);
            if d.is_finite() {
                finite_max = finite_max.max(d);
                cost[a * n + b] = d;
            } else {
                has_inf = true;
                cost[a * n + b] = f64::INFINITY;
            }
        }
    }
    let big_m = 1e9 * (1.0 + finite_max);
    if has_inf {
        for c in cost.iter_mut() {
            if !c.is_finite() {
                *c = big_m;
            }
        }
    }

    // LP: min c·x  s.t. row sums = mu, col sums = nu, x >= 0.
    // The constraint matrix has rank m+n-1, so drop the last column-sum row.
    let vars = m * n;
    let rows = m + n - 1;
    let mut a = vec![0.0; rows * vars];
    let mut b = vec![0.0; rows];
    for i in 0..m {
        for j in 0..n {
            a[i * vars + i * n + j] = 1.0;
        }
        b[i] = mu.mass()[i];
    }
    for j in 0..(n - 1) {
        for i in 0..m {
            a[(m + j) * vars + i * n + j] = 1.0;
        }
        b[m + j] = nu.mass()[j];
    }
    let x = simplex_two_phase(&a, &b, &cost, rows, vars);
    let total: f64 = x.iter().zip(&cost).map(|(xi, ci)| xi * ci).sum();
    if has_inf {
        let forbidden: f64 = x
            .iter()
            .zip(&cost)
            .filter(|(_, &c)| c == big_m)
            .map(|(xi, _)| xi)
            .sum();
        if forbidden > 1e-9 {
            return Err(TransportError::Infeasible);
        }
    }
    Ok(total)
}

/// Standard two-phase dense simplex with Bland's rule on
/// `min cᵀx  s.t. Ax = b, x ≥ 0` (A full row rank, b ≥ 0).
fn simplex_two_phase(a: &[f64], b: &[f64], c: &[f64], rows: usize, vars: usize) -> Vec<f64> {
    // Tableau with artificial variables appended: columns [x | artificials | rhs]
    let width = vars + rows + 1;
    let mut t = vec![0.0; rows * width];
    let mut basis: Vec<usize> = (0..rows).map(|i| vars + i).collect();
    for i in 0..rows {
        for j in 0..vars {
            t[i * width + j] = a[i * vars + j];
        }
        t[i * width + vars + i] = 1.0;
        t[i * width + width - 1] = b[i];
    }

    // Phase 1: minimize the sum of artificials.
    let phase1: Vec<f64> = (0..vars + rows)
        .map(|j| if j >= vars { 1.0 } else { 0.0 })
        .collect();
    run_simplex(&mut t, &mut basis, &phase1, rows, width, vars + rows);

    // Phase 2: original costs, artificial columns barred from entering.
    let mut phase2 = vec![0.0; vars + rows];
    phase2[..vars].copy_from_slice(c);
    run_simplex(&mut t, &mut basis, &phase2, rows, width, vars);

    let mut x = vec![0.0; vars];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < vars {
            x[bj] = t[i * width + width - 1];
        }
    }
    x
}

fn run_simplex(
    t: &mut [f64],
    basis: &mut [usize],
    cost: &[f64],
    rows: usize,
    width: usize,
    enter_limit: usize,
) {
    const TOL: f64 = 1e-11;
    for _ in 0..100_000 {
        // dual prices from the basis
        let mut y = vec![0.0; rows];
        for (i, &bj) in basis.iter().enumerate() {
            y[i] = cost[bj];
        }
        // entering: Bland — lowest index with negative reduced cost
        let mut entering = None;
        for j in 0..enter_limit {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j];
            for i in 0..rows {
                rc -= y[i] * t[i * width + j];
            }
            if rc < -TOL {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { return };
        // ratio test: Bland — smallest basis index among ties
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let aij = t[i * width + j];
            if aij > TOL {
                let ratio = t[i * width + width - 1] / aij;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - TOL
                            || ((ratio - lr).abs() <= TOL && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leave else { return }; // unbounded: cannot happen here
        // pivot
        let prow = pivot_row * width;
        let pval = t[prow + j];
        for x in &mut t[prow..prow + width] {
            *x /= pval;
        }
        for i in 0..rows {
            if i == pivot_row {
                continue;
            }
            let f = t[i * width + j];
            if f != 0.0 {
                for k in 0..width {
                    t[i * width + k] -= f * t[prow + k];
                }
            }
        }
        basis[pivot_row] = j;
    }
    panic!("simplex exceeded pivot budget");
}

// This row-major tableau simplex recomputes reduced costs from scratch each
// pivot, which is wasteful but keeps it clearly independent from the
// production transport solver.

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

    #[test]
    fn eigendecomposition_reconstructs() {
        let l = k3().laplacian();
        let eig = eigendecompose(&l);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let rebuilt = eig.apply_spectral(|x| x);
        assert!(l.max_abs_diff(&rebuilt) < 1e-8);
        // orthonormality
        let gram = eig.vectors.transpose() * &eig.vectors;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(gram[(i, j)], want, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn pseudoinverse_resistance_golden() {
        // K_2: spectrum {0, 2}, Ω = [[0,1],[1,0]]
        let r = pseudoinverse_resistance(&k2()).unwrap();
        assert_abs_diff_eq!(r.omega[(0, 1)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.omega[(0, 0)], 0.0, epsilon = 1e-12);

        // P_3: series resistors
        let r = pseudoinverse_resistance(&p3()).unwrap();
        assert_abs_diff_eq!(r.omega[(0, 2)], 2.0, epsilon = 1e-10);

        // K_3: parallel-resistor law
        let r = pseudoinverse_resistance(&k3()).unwrap();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert_abs_diff_eq!(r.omega[(i, j)], 2.0 / 3.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn pseudoinverse_rejects_disconnected() {
        let g = Graph::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(
            pseudoinverse_resistance(&g),
            Err(OracleError::MultipleZeroEigenvalues(2))
        ));
    }

    #[test]
    fn nullspace_reports() {
        let k4 = load_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        let rep = nullspace_check(&k4.laplacian());
        assert_eq!(rep.zero_count, 1);
        assert!(rep.ones_alignment >= 1.0 - 1e-9);

        let two = Graph::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(nullspace_check(&two.laplacian()).zero_count, 2);

        let single = Graph::new(1, vec![]).unwrap();
        assert_eq!(nullspace_check(&single.laplacian()).zero_count, 1);
    }

    #[test]
    fn matrix_exponential_limits() {
        let l = k2().laplacian();
        let id = matrix_exponential(&l, 0.0);
        assert_abs_diff_eq!(id[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(id[(0, 1)], 0.0, epsilon = 1e-12);

        let far = matrix_exponential(&l, 50.0);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(far[(i, j)], 0.5, epsilon = 1e-9);
            }
        }

        // small-t Taylor: exp(-Lt) ≈ I - Lt
        let t = 1e-4;
        let small = matrix_exponential(&l, t);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 } - l[(i, j)] * t;
                assert!((small[(i, j)] - want).abs() < 10.0 * t * t);
            }
        }
    }

    #[test]
    fn heat_kernel_row_sums() {
        let g = load_edge_list("0 1\n1 2\n2 3\n0 3\n0 2").unwrap();
        let heat = matrix_exponential(&g.laplacian(), 0.7);
        for i in 0..4 {
            let s: f64 = (0..4).map(|j| heat[(i, j)]).sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn expected_pair_distance_at_zero() {
        let g = k3();
        let pinv = pseudoinverse_resistance(&g).unwrap();
        let d = expected_pair_distance(&g, 0, 1, 0.0).unwrap();
        assert_abs_diff_eq!(d, pinv.omega[(0, 1)], epsilon = 1e-10);
        let dd = expected_pair_distance(&g, 2, 2, 0.0).unwrap();
        assert_abs_diff_eq!(dd, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn expected_pair_distance_k2_small_t() {
        // exact value is (1 + e^{-4t})/2 = 1 - 2t + O(t²), matching the
        // first-order expansion w - 2(p_i + p_j) t with p = (1/2, 1/2)
        for &t in &[1e-3, 1e-4] {
            let d = expected_pair_distance(&k2(), 0, 1, t).unwrap();
            assert_abs_diff_eq!(d, 0.5 * (1.0 + (-4.0 * t).exp()), epsilon = 1e-12);
            assert!((d - (1.0 - 2.0 * t)).abs() < 8.1 * t * t);
        }
    }

    #[test]
    fn prop4_limits_converge_to_edge_curvature() {
        let ts = [1e-2, 1e-3, 1e-4];
        let rep = prop4_limit_check(&k2(), 0, &ts).unwrap();
        assert_abs_diff_eq!(rep.k_ij, 2.0, epsilon = 1e-9);
        let ratio = rep.errors[2].1 / rep.errors[1].1;
        assert!((0.05..=0.2).contains(&ratio), "ratio {ratio}");

        let rep = prop4_limit_check(&k3(), 0, &ts).unwrap();
        assert_abs_diff_eq!(rep.k_ij, 2.0, epsilon = 1e-9);
        assert!((rep.fitted_order - 1.0).abs() < 0.3);

        let rep = prop4_limit_check(&p3(), 0, &ts).unwrap();
        assert_abs_diff_eq!(rep.k_ij, 1.0, epsilon = 1e-9);
        assert!((rep.estimates[2].1 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn brute_w1_point_masses() {
        let mu = DiscreteDistribution::new(vec![0], vec![1.0]).unwrap();
        let nu = DiscreteDistribution::new(vec![2], vec![1.0]).unwrap();
        let d = brute_force_w1(&mu, &nu, |_, _| 2.0).unwrap();
        assert_abs_diff_eq!(d, 2.0, epsilon = 1e-12);

        let same = brute_force_w1(&mu, &mu, |_, _| 0.0).unwrap();
        assert_abs_diff_eq!(same, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn brute_w1_p3_lazy_pair() {
        // distributions of the two endpoints of edge (0,1) on P_3 at α = 1/2
        let mu = DiscreteDistribution::new(vec![0, 1], vec![0.5, 0.5]).unwrap();
        let nu = DiscreteDistribution::new(vec![1, 0, 2], vec![0.5, 0.25, 0.25]).unwrap();
        let hop = |x: usize, y: usize| (x as f64 - y as f64).abs();
        let d = brute_force_w1(&mu, &nu, hop).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn brute_w1_infeasible_on_infinite_routes() {
        let mu = DiscreteDistribution::new(vec![0], vec![1.0]).unwrap();
        let nu = DiscreteDistribution::new(vec![1], vec![1.0]).unwrap();
        let err = brute_force_w1(&mu, &nu, |_, _| f64::INFINITY);
        assert!(matches!(err, Err(TransportError::Infeasible)));
    }
}
