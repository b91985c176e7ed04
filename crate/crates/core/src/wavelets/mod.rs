//! Orthonormal transforms on finite grids: operator-like exponential-spline
//! wavelets (Haar at `α = 0`), KLT and DCT references, and M-term
//! approximation.

mod basis;
mod dense;
mod mterm;

pub use basis::{
    espline_basis, haar_basis, BSpline, BSplineDegree, CoefficientTable, WaveletBasis, WaveletCoefficient,
};
pub use dense::{dct_basis, klt_basis, toeplitz_from_fn, DenseBasis};
pub use mterm::{m_term_curve, m_term_error, OrthoTransform};
