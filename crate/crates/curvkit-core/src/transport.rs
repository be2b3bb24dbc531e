//! Exact balanced optimal transport via the transportation simplex (network
//! simplex specialized to dense bipartite instances).
//!
//! Bland's pivot rule on both the entering and leaving variable gives finite,
//! deterministic termination; costs stay in floating point and are only
//! rounded at reporting time. Forbidden routes (infinite ground distance) are
//! handled with a big-M penalty and rejected after the solve if they carry
//! mass.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("transport problem is infeasible: mass must cross an infinite-cost route")]
    Infeasible,
    #[error("supply and demand totals differ by {0}")]
    Unbalanced(f64),
    #[error("transportation simplex exceeded its pivot budget")]
    PivotBudget,
}

/// Optimal plan for a balanced transportation problem.
#[derive(Debug, Clone)]
pub struct Transport {
    /// Minimal total cost.
    pub cost: f64,
    /// Row-major `m×n` flow matrix.
    pub flow: Vec<f64>,
}

/// Solve `min Σ cost[i*n+j]·x_ij` subject to row sums = `supply`, column sums
/// = `demand`, `x ≥ 0`. Requires balanced totals (within 1e-9).
pub fn min_cost_transport(
    supply: &[f64],
    demand: &[f64],
    cost: &[f64],
) -> Result<Transport, TransportError> {
    let m = supply.len();
    let n = demand.len();
    assert!(m > 0 && n > 0, "empty marginals");
    assert_eq!(cost.len(), m * n, "cost matrix shape mismatch");
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-9 * total_s.max(total_d).max(1.0) {
        return Err(TransportError::Unbalanced(total_s - total_d));
    }

    // forbidden cells -> big-M
    let finite_max = cost.iter().copied().filter(|c| c.is_finite()).fold(0.0f64, f64::max);
    let big_m = 1e9 * (1.0 + finite_max);
    let has_inf = cost.iter().any(|c| !c.is_finite());
    let cost: Vec<f64> = cost
        .iter()
        .map(|&c| if c.is_finite() { c } else { big_m })
        .collect();

    let mut basis = northwest_corner(supply, demand);
    let tol = 1e-12 * (1.0 + finite_max.max(if has_inf { big_m } else { 0.0 }));

    let mut pivots = 0usize;
    let mut degenerate_run = 0usize;
    loop {
        pivots += 1;
        if pivots > 200_000 {
            return Err(TransportError::PivotBudget);
        }
        let (u, v) = duals(&basis, &cost, m, n);

        // Entering: most negative reduced cost (ties by lowest (i, j)).
        // After a long degenerate run, fall back to Bland's rule — first
        // negative cell — whose finite-termination guarantee breaks cycles.
        let bland = degenerate_run > 2 * (m + n);
        let mut entering = None;
        let mut best_rc = -tol;
        let mut in_basis = vec![false; m * n];
        for &(i, j) in &basis.cells {
            in_basis[i * n + j] = true;
        }
        'scan: for i in 0..m {
            for j in 0..n {
                if in_basis[i * n + j] {
                    continue;
                }
                let rc = cost[i * n + j] - u[i] - v[j];
                if rc < best_rc {
                    best_rc = rc;
                    entering = Some((i, j));
                    if bland {
                        break 'scan;
                    }
                }
            }
        }
        let Some((ei, ej)) = entering else { break };

        // unique tree cycle through the entering cell
        let path = basis.tree_path(ej + m, ei, m);
        // entering is +θ; path cells alternate −, +, − ... from the col end
        let mut theta = f64::INFINITY;
        let mut leaving: Option<usize> = None;
        for (pos, &cell) in path.iter().enumerate() {
            if pos % 2 == 0 {
                let f = basis.flow[cell];
                let key = basis.cells[cell].0 * n + basis.cells[cell].1;
                let take = match leaving {
                    None => true,
                    Some(l) => {
                        let lk = basis.cells[l].0 * n + basis.cells[l].1;
                        f < theta || (f == theta && key < lk)
                    }
                };
                if take {
                    theta = f;
                    leaving = Some(cell);
                }
            }
        }
        let leaving = leaving.expect("cycle must contain a decreasing cell");

        for (pos, &cell) in path.iter().enumerate() {
            if pos % 2 == 0 {
                basis.flow[cell] -= theta;
            } else {
                basis.flow[cell] += theta;
            }
        }
        basis.replace(leaving, (ei, ej), theta);
        degenerate_run = if theta > 0.0 { 0 } else { degenerate_run + 1 };
    }

    let mut flow = vec![0.0; m * n];
    for (idx, &(i, j)) in basis.cells.iter().enumerate() {
        flow[i * n + j] = basis.flow[idx].max(0.0);
    }
    let total: f64 = flow.iter().zip(&cost).map(|(f, c)| f * c).sum();
    if has_inf {
        let forbidden: f64 = flow
            .iter()
            .zip(&cost)
            .filter(|(_, &c)| c == big_m)
            .map(|(f, _)| f)
            .sum();
        if forbidden > 1e-9 {
            return Err(TransportError::Infeasible);
        }
    }
    Ok(Transport { cost: total, flow })
}

/// Basic feasible solution as a spanning tree of the bipartite supply/demand
/// graph; rows are nodes `0..m`, columns are `m..m+n`.
struct Basis {
    cells: Vec<(usize, usize)>,
    flow: Vec<f64>,
    m: usize,
    n: usize,
}

impl Basis {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for (idx, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push((self.m + j, idx));
            adj[self.m + j].push((i, idx));
        }
        adj
    }

    /// Cells along the unique tree path between two nodes.
    fn tree_path(&self, from: usize, to: usize, _m: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let total = self.m + self.n;
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; total];
        let mut seen = vec![false; total];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &(y, cell) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, cell));
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while let Some((parent, cell)) = prev[cur] {
            path.push(cell);
            cur = parent;
        }
        path.reverse();
        path
    }

    fn replace(&mut self, leaving: usize, entering: (usize, usize), theta: f64) {
        self.cells[leaving] = entering;
        self.flow[leaving] = theta;
    }
}

/// Dual prices from the basis tree: `u_i + v_j = c_ij` on basic cells, with
/// `u_0 = 0` as the root.
fn duals(basis: &Basis, cost: &[f64], m: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    let adj = basis.adjacency();
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut seen = vec![false; m + n];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &(y, cell) in &adj[x] {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            let (i, j) = basis.cells[cell];
            if y >= m {
                v[y - m] = cost[i * n + j] - u[i];
            } else {
                u[y] = cost[i * n + j] - v[x - m];
            }
            queue.push_back(y);
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "basis must span all nodes");
    (u, v)
}

fn northwest_corner(supply: &[f64], demand: &[f64]) -> Basis {
    let m = supply.len();
    let n = demand.len();
    let mut s = supply.to_vec();
    let mut d = demand.to_vec();
    let mut cells = Vec::with_capacity(m + n - 1);
    let mut flow = Vec::with_capacity(m + n - 1);
    let (mut i, mut j) = (0usize, 0usize);
    loop {
        let q = s[i].min(d[j]).max(0.0);
        cells.push((i, j));
        flow.push(q);
        s[i] -= q;
        d[j] -= q;
        if i == m - 1 && j == n - 1 {
            break;
        }
        // advance exactly one index per step so the basis is a spanning tree
        if (s[i] <= d[j] && i < m - 1) || j == n - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    debug_assert_eq!(cells.len(), m + n - 1);
    Basis { cells, flow, m, n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_plan_is_free() {
        let p = [0.3, 0.7];
        let cost = [0.0, 1.0, 1.0, 0.0];
        let t = min_cost_transport(&p, &p, &cost).unwrap();
        assert_abs_diff_eq!(t.cost, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn point_masses_pay_the_distance() {
        let t = min_cost_transport(&[1.0], &[1.0], &[3.25]).unwrap();
        assert_abs_diff_eq!(t.cost, 3.25, epsilon = 1e-12);
    }

    #[test]
    fn marginals_hold() {
        let supply = [0.5, 0.3, 0.2];
        let demand = [0.25, 0.25, 0.5];
        let cost = [1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 3.0, 2.0, 1.0];
        let t = min_cost_transport(&supply, &demand, &cost).unwrap();
        for i in 0..3 {
            let row: f64 = (0..3).map(|j| t.flow[i * 3 + j]).sum();
            assert_abs_diff_eq!(row, supply[i], epsilon = 1e-12);
        }
        for j in 0..3 {
            let col: f64 = (0..3).map(|i| t.flow[i * 3 + j]).sum();
            assert_abs_diff_eq!(col, demand[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn forbidden_route_infeasible() {
        let err = min_cost_transport(&[1.0], &[1.0], &[f64::INFINITY]);
        assert!(matches!(err, Err(TransportError::Infeasible)));
    }

    #[test]
    fn unbalanced_rejected() {
        let err = min_cost_transport(&[1.0], &[0.5], &[1.0]);
        assert!(matches!(err, Err(TransportError::Unbalanced(_))));
    }
}
