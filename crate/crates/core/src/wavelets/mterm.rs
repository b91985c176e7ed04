use super::{DenseBasis, WaveletBasis};
use crate::error::{invalid, Result};

/// An orthonormal analysis/synthesis pair on vectors of fixed length.
pub trait OrthoTransform: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn forward(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn inverse(&self, c: &[f64]) -> Result<Vec<f64>>;
}

impl OrthoTransform for DenseBasis {
    fn len(&self) -> usize {
        DenseBasis::len(self)
    }

    fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        DenseBasis::forward(self, x)
    }

    fn inverse(&self, c: &[f64]) -> Result<Vec<f64>> {
        DenseBasis::inverse(self, c)
    }
}

/// Uses the `ℓ²`-orthonormal profiles (spacing taken as 1 for the vector).
impl OrthoTransform for WaveletBasis {
    fn len(&self) -> usize {
        self.n
    }

    fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let s = self.delta.sqrt();
        Ok(self.forward_flat(x)?.into_iter().map(|c| c / s).collect())
    }

    fn inverse(&self, c: &[f64]) -> Result<Vec<f64>> {
        let s = self.delta.sqrt();
        self.inverse_flat(&c.iter().map(|v| v * s).collect::<Vec<_>>())
    }
}

/// Relative errors `‖x − x_M‖²/‖x‖²` for each `M` in `ms`, where `x_M`
/// keeps the `M` largest-magnitude coefficients. A zero signal has error 0.
pub fn m_term_curve(x: &[f64], transform: &dyn OrthoTransform, ms: &[usize]) -> Result<Vec<f64>> {
    let n = transform.len();
    if let Some(&m) = ms.iter().find(|&&m| m > n) {
        return Err(invalid(format!("M = {m} exceeds the transform size {n}")));
    }
    let c = transform.forward(x)?;
    let mut energy: Vec<f64> = c.iter().map(|v| v * v).collect();
    energy.sort_by(|a, b| b.total_cmp(a));
    // tail[m] = energy discarded when keeping the m largest
    let mut tail = vec![0.0; n + 1];
    for m in (0..n).rev() {
        tail[m] = tail[m + 1] + energy[m];
    }
    let total = tail[0];
    Ok(ms.iter().map(|&m| if total > 0.0 { (tail[m] / total).clamp(0.0, 1.0) } else { 0.0 }).collect())
}

pub fn m_term_error(x: &[f64], transform: &dyn OrthoTransform, m: usize) -> Result<f64> {
    Ok(m_term_curve(x, transform, &[m])?[0])
}
