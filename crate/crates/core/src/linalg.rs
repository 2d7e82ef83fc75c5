//! Small dense square matrices and the Cholesky factorization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pivots at or below this value are treated as loss of positive definiteness.
pub const PIVOT_TOL: f64 = 1e-12;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::ArityMismatch {
                    what: format!("matrix row {i}"),
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Equicorrelation matrix with unit diagonal and `rho` elsewhere.
    pub fn equicorrelation(dim: usize, rho: f64) -> Self {
        let mut m = Self::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    m.set(i, j, rho);
                }
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.rows()
    }
}

/// Lower-triangular `L` with `L Lᵀ = Σ` and a strictly positive diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct CholeskyFactor {
    l: Matrix,
}

impl CholeskyFactor {
    pub fn lower(&self) -> &Matrix {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }

    /// `L · z`.
    pub fn mul_vec(&self, z: &[f64], out: &mut [f64]) {
        let d = self.l.dim();
        for i in 0..d {
            let mut acc = 0.0;
            for (j, zj) in z.iter().enumerate().take(i + 1) {
                acc += self.l.get(i, j) * zj;
            }
            out[i] = acc;
        }
    }

    /// `L Lᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let d = self.l.dim();
        let mut m = Matrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let s: f64 = (0..=i.min(j)).map(|k| self.l.get(i, k) * self.l.get(j, k)).sum();
                m.set(i, j, s);
            }
        }
        m
    }
}

/// Cholesky–Banachiewicz factorization of a symmetric matrix.
///
/// Fails with `NotPositiveDefinite` when a pivot drops to `PIVOT_TOL` or below,
/// which also rejects positive semi-definite but singular inputs.
pub fn cholesky(sigma: &Matrix) -> Result<CholeskyFactor> {
    if !sigma.is_symmetric(1e-12) {
        return Err(Error::domain("cholesky input is not symmetric"));
    }
    let d = sigma.dim();
    let mut l = Matrix::zeros(d);
    for i in 0..d {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l.get(i, k) * l.get(j, k)).sum();
            if i == j {
                let pivot = sigma.get(i, i) - s;
                if pivot.is_nan() || pivot <= PIVOT_TOL {
                    return Err(Error::NotPositiveDefinite { row: i, pivot });
                }
                l.set(i, i, pivot.sqrt());
            } else {
                l.set(i, j, (sigma.get(i, j) - s) / l.get(j, j));
            }
        }
    }
    Ok(CholeskyFactor { l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_factor() {
        let f = cholesky(&Matrix::identity(4)).unwrap();
        assert_eq!(f.lower(), &Matrix::identity(4));
    }

    #[test]
    fn bivariate_correlation_factor() {
        let s = Matrix::from_rows(&[vec![1.0, 0.71], vec![0.71, 1.0]]).unwrap();
        let f = cholesky(&s).unwrap();
        let l = f.lower();
        assert!((l.get(0, 0) - 1.0).abs() < 1e-15);
        assert_eq!(l.get(0, 1), 0.0);
        assert!((l.get(1, 0) - 0.71).abs() < 1e-15);
        // sqrt(1 - 0.71^2)
        assert!((l.get(1, 1) - 0.704_201_675_658_330_1).abs() < 1e-12);
    }

    #[test]
    fn indefinite_rejected() {
        let s = Matrix::from_rows(&[vec![1.0, 1.5], vec![1.5, 1.0]]).unwrap();
        assert!(matches!(cholesky(&s), Err(Error::NotPositiveDefinite { row: 1, .. })));
    }

    #[test]
    fn singular_psd_rejected() {
        let s = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&s), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0]]).is_err());
    }

    fn pd_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..=10).prop_flat_map(|d| {
            prop::collection::vec(-1.0f64..1.0, d * d).prop_map(move |v| {
                // B Bᵀ + d I is comfortably positive definite.
                let mut m = Matrix::zeros(d);
                for i in 0..d {
                    for j in 0..d {
                        let s: f64 = (0..d).map(|k| v[i * d + k] * v[j * d + k]).sum();
                        m.set(i, j, s + if i == j { d as f64 } else { 0.0 });
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(m in pd_matrix()) {
            let f = cholesky(&m).unwrap();
            prop_assert!(f.reconstruct().max_abs_diff(&m) <= 1e-10);
            for i in 0..m.dim() {
                prop_assert!(f.lower().get(i, i) > 0.0);
                for j in i + 1..m.dim() {
                    prop_assert_eq!(f.lower().get(i, j), 0.0);
                }
            }
        }
    }
}
