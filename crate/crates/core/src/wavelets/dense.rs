use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};

/// Orthonormal basis stored as the rows of a square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseBasis {
    pub rows: DMatrix<f64>,
    /// Eigenvalues in row order (KLT only).
    pub eigenvalues: Option<Vec<f64>>,
}

impl DenseBasis {
    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.len() {
            return Err(Error::ShapeMismatch { expected: self.len(), got: x.len() });
        }
        Ok((&self.rows * DVector::from_column_slice(x)).as_slice().to_vec())
    }

    pub fn inverse(&self, c: &[f64]) -> Result<Vec<f64>> {
        if c.len() != self.len() {
            return Err(Error::ShapeMismatch { expected: self.len(), got: c.len() });
        }
        Ok((self.rows.tr_mul(&DVector::from_column_slice(c))).as_slice().to_vec())
    }

    /// Largest entry of `|R·Rᵀ − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = &self.rows * self.rows.transpose();
        (g - DMatrix::identity(self.len(), self.len())).abs().max()
    }
}

/// Symmetric Toeplitz matrix `[r(|m − n|)]`.
pub fn toeplitz_from_fn(n: usize, r: impl Fn(usize) -> f64) -> DMatrix<f64> {
    let col: Vec<f64> = (0..n).map(r).collect();
    DMatrix::from_fn(n, n, |i, j| col[i.abs_diff(j)])
}

/// Karhunen–Loève basis of the Toeplitz covariance built from `r[0..n)`,
/// ordered by decreasing eigenvalue.
///
/// Each eigenvector is signed so that its largest-magnitude entry is positive.
pub fn klt_basis(r: &[f64]) -> Result<DenseBasis> {
    let n = r.len();
    if n == 0 || r.iter().any(|v| !v.is_finite()) {
        return Err(invalid("correlation sequence must be non-empty and finite"));
    }
    let eig = toeplitz_from_fn(n, |k| r[k]).symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min < -1e-10 * r[0].abs().max(1e-300) {
        return Err(Error::NotPositiveDefinite(min));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut rows = DMatrix::zeros(n, n);
    for (i, &c) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(c);
        let pivot = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            rows[(i, j)] = sign * v[j];
        }
    }
    Ok(DenseBasis { rows, eigenvalues: Some(order.iter().map(|&c| eig.eigenvalues[c]).collect()) })
}

/// Orthonormal DCT-II matrix.
pub fn dct_basis(n: usize) -> Result<DenseBasis> {
    if n == 0 {
        return Err(invalid("DCT size must be positive"));
    }
    let nf = n as f64;
    let rows = DMatrix::from_fn(n, n, |k, j| {
        let s = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        s * (PI * (j as f64 + 0.5) * k as f64 / nf).cos()
    });
    Ok(DenseBasis { rows, eigenvalues: None })
}
