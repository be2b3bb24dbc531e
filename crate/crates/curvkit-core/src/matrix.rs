//! Dense symmetric matrix wrapper used for Laplacians, inverses and
//! resistance matrices at desk scale.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
}

/// Dense symmetric real matrix. Symmetry is validated on entry (1e-12
/// relative to the largest magnitude) and exact for internally built values.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl SymMatrix {
    /// Validating constructor for externally produced matrices.
    pub fn new(m: DMatrix<f64>) -> Result<Self, MatrixError> {
        if m.nrows() != m.ncols() {
            return Err(MatrixError::NotSquare(m.nrows(), m.ncols()));
        }
        let scale = m.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if !m[(i, j)].is_finite() {
                    return Err(MatrixError::NonFinite(i, j));
                }
                if j > i && (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(MatrixError::Asymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix { m })
    }

    /// For matrices symmetric by construction (Laplacians, spectral forms).
    pub(crate) fn new_unchecked(m: DMatrix<f64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        SymMatrix { m }
    }

    /// Wrap a nearly-symmetric computed result, averaging off-diagonal pairs.
    pub(crate) fn symmetrized(mut m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        SymMatrix { m }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix { m: DMatrix::zeros(n, n) }
    }

    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Largest absolute entry (max norm).
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }

    /// Max norm of the elementwise difference.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.order(), other.order());
        self.m
            .iter()
            .zip(other.m.iter())
            .fold(0.0f64, |a, (&x, &y)| a.max((x - y).abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.m[(i, j)] * x[j];
            }
            y[i] = acc;
        }
        y
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.m[idx]
    }
}
