use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operators::SampledPath;

/// Dyadic wavelet basis matched to `L = D − α·Id` (real `α ≤ 0`).
///
/// On a block of `2^j` samples the level-`j` wavelet is `a·e^{αt}` on the
/// left half and `−b·e^{αt}` on the right half, with `a, b` chosen so that it
/// is orthogonal to `e^{αt}` on the block and has unit norm. The coarse layer
/// holds the normalized exponentials on blocks of `2^levels` samples. All
/// functions are orthonormal for the inner product `Δ·Σ u_k v_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletBasis {
    pub alpha: f64,
    pub t_start: f64,
    pub delta: f64,
    pub n: usize,
    pub levels: usize,
    /// Unit-norm (in ℓ²) block profiles; `detail[j-1]` has `2^j` entries.
    detail: Vec<Vec<f64>>,
    coarse: Vec<f64>,
}

/// Analysis coefficients, finest level first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    /// `details[j-1][k]` is the coefficient of the level-`j` wavelet at shift `k`.
    pub details: Vec<Vec<f64>>,
    /// Coefficients of the scaling functions on the coarsest blocks.
    pub coarse: Vec<f64>,
}

/// One row of a flattened coefficient table; the coarse layer has `scale = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveletCoefficient {
    pub scale: usize,
    pub shift: usize,
    pub value: f64,
}

impl CoefficientTable {
    pub fn len(&self) -> usize {
        self.coarse.len() + self.details.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coarse layer first, then details from the finest level.
    pub fn flatten(&self) -> Vec<f64> {
        let mut v = self.coarse.clone();
        for d in &self.details {
            v.extend_from_slice(d);
        }
        v
    }

    pub fn rows(&self) -> Vec<WaveletCoefficient> {
        let mut rows: Vec<_> = self
            .coarse
            .iter()
            .enumerate()
            .map(|(k, &value)| WaveletCoefficient { scale: 0, shift: k, value })
            .collect();
        for (j, d) in self.details.iter().enumerate() {
            rows.extend(d.iter().enumerate().map(|(k, &value)| WaveletCoefficient { scale: j + 1, shift: k, value }));
        }
        rows
    }

    fn unflatten(&self, flat: &[f64]) -> Self {
        let mut it = flat.iter().copied();
        let coarse = it.by_ref().take(self.coarse.len()).collect();
        let details = self.details.iter().map(|d| it.by_ref().take(d.len()).collect()).collect();
        Self { details, coarse }
    }
}

fn exp_profile(alpha: f64, delta: f64, len: usize) -> Vec<f64> {
    (0..len).map(|m| (alpha * delta * m as f64).exp()).collect()
}

fn detail_profile(alpha: f64, delta: f64, level: usize) -> Vec<f64> {
    let half = 1usize << (level - 1);
    let e = exp_profile(alpha, delta, 2 * half);
    let s_left: f64 = e[..half].iter().map(|v| v * v).sum();
    let s_right: f64 = e[half..].iter().map(|v| v * v).sum();
    // a·S_L = b·S_R and a²·S_L + b²·S_R = 1
    let a = (s_right / (s_left * (s_left + s_right))).sqrt();
    let b = a * s_left / s_right;
    e.iter().enumerate().map(|(m, v)| if m < half { a * v } else { -b * v }).collect()
}

/// Exponential-spline wavelet basis on `n` samples starting at `t_start`.
pub fn espline_basis(alpha: f64, t_start: f64, delta: f64, n: usize, levels: usize) -> Result<WaveletBasis> {
    if !(alpha <= 0.0) || !alpha.is_finite() {
        return Err(invalid(format!("E-spline wavelets need a real α ≤ 0, got {alpha}")));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(invalid(format!("grid spacing must be positive, got {delta}")));
    }
    if levels == 0 || levels >= usize::BITS as usize || n == 0 || !n.is_multiple_of(1usize << levels) {
        return Err(invalid(format!("{n} samples cannot hold {levels} dyadic levels")));
    }
    let detail = (1..=levels).map(|j| detail_profile(alpha, delta, j)).collect();
    let mut coarse = exp_profile(alpha, delta, 1 << levels);
    let norm = coarse.iter().map(|v| v * v).sum::<f64>().sqrt();
    coarse.iter_mut().for_each(|v| *v /= norm);
    Ok(WaveletBasis { alpha, t_start, delta, n, levels, detail, coarse })
}

/// Haar basis, i.e. the exponential-spline basis with `α = 0`.
pub fn haar_basis(t_start: f64, delta: f64, n: usize, levels: usize) -> Result<WaveletBasis> {
    espline_basis(0.0, t_start, delta, n, levels)
}

impl WaveletBasis {
    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::ShapeMismatch { expected: self.n, got });
        }
        Ok(())
    }

    fn check_level(&self, level: usize, shift: usize) -> Result<()> {
        if level == 0 || level > self.levels || shift >= self.n >> level {
            return Err(invalid(format!("no wavelet at level {level}, shift {shift}")));
        }
        Ok(())
    }

    /// Coefficients `⟨x, ψ_{j,k}⟩ = Δ·Σ x_n ψ_{j,k}(t_n)`.
    pub fn analyze(&self, x: &[f64]) -> Result<CoefficientTable> {
        self.check_len(x.len())?;
        let scale = self.delta.sqrt();
        let project = |profile: &[f64]| -> Vec<f64> {
            x.chunks(profile.len())
                .map(|blk| scale * blk.iter().zip(profile).map(|(a, b)| a * b).sum::<f64>())
                .collect()
        };
        Ok(CoefficientTable {
            details: self.detail.iter().map(|p| project(p)).collect(),
            coarse: project(&self.coarse),
        })
    }

    /// Inverse of [`analyze`](Self::analyze).
    pub fn synthesize(&self, coeffs: &CoefficientTable) -> Result<Vec<f64>> {
        if coeffs.details.len() != self.levels {
            return Err(Error::ShapeMismatch { expected: self.levels, got: coeffs.details.len() });
        }
        let scale = 1.0 / self.delta.sqrt();
        let mut x = vec![0.0; self.n];
        let mut add = |profile: &[f64], c: &[f64]| -> Result<()> {
            if c.len() * profile.len() != self.n {
                return Err(Error::ShapeMismatch { expected: self.n / profile.len(), got: c.len() });
            }
            for (blk, &ck) in x.chunks_mut(profile.len()).zip(c) {
                blk.iter_mut().zip(profile).for_each(|(v, p)| *v += scale * ck * p);
            }
            Ok(())
        };
        add(&self.coarse, &coeffs.coarse)?;
        for (p, c) in self.detail.iter().zip(&coeffs.details) {
            add(p, c)?;
        }
        Ok(x)
    }

    pub fn analyze_path(&self, x: &SampledPath) -> Result<CoefficientTable> {
        self.analyze(&x.real())
    }

    pub fn synthesize_path(&self, coeffs: &CoefficientTable) -> Result<SampledPath> {
        SampledPath::from_real(self.t_start, self.delta, &self.synthesize(coeffs)?)
    }

    /// Flat coefficient vector (coarse layer first).
    pub fn forward_flat(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.analyze(x)?.flatten())
    }

    pub fn inverse_flat(&self, flat: &[f64]) -> Result<Vec<f64>> {
        self.check_len(flat.len())?;
        let template = CoefficientTable {
            details: (1..=self.levels).map(|j| vec![0.0; self.n >> j]).collect(),
            coarse: vec![0.0; self.n >> self.levels],
        };
        self.synthesize(&template.unflatten(flat))
    }

    /// Wavelet `ψ_{j,k}` sampled on the full grid.
    pub fn wavelet(&self, level: usize, shift: usize) -> Result<SampledPath> {
        self.check_level(level, shift)?;
        let p = &self.detail[level - 1];
        let mut v = vec![0.0; self.n];
        let s = self.delta.sqrt();
        v[shift * p.len()..(shift + 1) * p.len()].iter_mut().zip(p).for_each(|(a, b)| *a = b / s);
        SampledPath::from_real(self.t_start, self.delta, &v)
    }

    /// Smoothing kernel `φ_{j,k}` with `ψ_{j,k} = L*φ_{j,k}`, where
    /// `L* = −D − α`, sampled on the full grid.
    ///
    /// On the grid it satisfies `ψ_n = −(φ_n − e^{−αΔ}·φ_{n−1})/Δ` exactly and
    /// vanishes outside the wavelet's block.
    pub fn kernel(&self, level: usize, shift: usize) -> Result<SampledPath> {
        self.check_level(level, shift)?;
        let psi = self.wavelet(level, shift)?;
        let len = self.detail[level - 1].len();
        let start = shift * len;
        let mut v = vec![0.0; self.n];
        let mut acc = 0.0;
        for m in 0..len {
            let w = (self.alpha * self.delta * m as f64).exp();
            acc += w * psi.values[start + m].re;
            // the last entry is zero up to rounding
            v[start + m] = if m + 1 == len { 0.0 } else { -self.delta * acc / w };
        }
        SampledPath::from_real(self.t_start, self.delta, &v)
    }

    /// Number of wavelets at `level`.
    pub fn shifts(&self, level: usize) -> usize {
        if level == 0 {
            self.n >> self.levels
        } else {
            self.n >> level
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BSplineDegree {
    /// `β_0 = 1_{[0,1)}`.
    Rect,
    /// `β_{(0,0)} = β_0 * β_0`, the unit triangle on `[0, 2]`.
    Triangle,
}

/// Causal B-spline sampled on a grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BSpline {
    pub degree: BSplineDegree,
    pub path: SampledPath,
}

impl BSpline {
    /// `1/delta` must be an integer.
    pub fn sample(degree: BSplineDegree, delta: f64) -> Result<Self> {
        let per_unit = (1.0 / delta).round();
        if !(delta > 0.0) || (per_unit * delta - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("unit interval is not a multiple of the spacing {delta}")));
        }
        let per_unit = per_unit as usize;
        let values: Vec<f64> = match degree {
            BSplineDegree::Rect => vec![1.0; per_unit],
            BSplineDegree::Triangle => (0..=2 * per_unit)
                .map(|k| {
                    let t = k as f64 * delta;
                    if t <= 1.0 {
                        t
                    } else {
                        2.0 - t
                    }
                })
                .collect(),
        };
        Ok(Self { degree, path: SampledPath::from_real(0.0, delta, &values)? })
    }
}
