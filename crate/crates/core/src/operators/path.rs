use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Values on the uniform grid `t_k = t_start + k·delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    pub t_start: f64,
    pub delta: f64,
    pub values: Vec<Complex64>,
}

/// Whether an operator acts as itself or as its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Adjoint,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Adjoint,
            Direction::Adjoint => Direction::Forward,
        }
    }
}

impl SampledPath {
    pub fn new(t_start: f64, delta: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) || !t_start.is_finite() {
            return Err(invalid(format!("grid needs finite origin and positive spacing, got ({t_start}, {delta})")));
        }
        Ok(Self { t_start, delta, values })
    }

    pub fn from_real(t_start: f64, delta: f64, values: &[f64]) -> Result<Self> {
        Self::new(t_start, delta, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(t_start: f64, delta: f64, n: usize) -> Result<Self> {
        Self::new(t_start, delta, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(t_start: f64, delta: f64, n: usize, f: F) -> Result<Self> {
        Self::new(t_start, delta, (0..n).map(|k| f(t_start + k as f64 * delta)).collect())
    }

    /// Grid approximation of `δ(· − t)`: `1/Δ` on the cell nearest to `t`.
    pub fn dirac(t_start: f64, delta: f64, n: usize, t: f64) -> Result<Self> {
        let mut p = Self::zeros(t_start, delta, n)?;
        let k = p.nearest_index(t)?;
        p.values[k] = Complex64::new(1.0 / delta, 0.0);
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.delta
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.len().saturating_sub(1))
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.t(k)).collect()
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Largest imaginary part relative to the largest magnitude.
    pub fn relative_imaginary(&self) -> f64 {
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / max
    }

    pub(crate) fn check_inside(&self, t: f64) -> Result<()> {
        let end = self.t_end();
        let slack = 1e-9 * self.delta;
        if self.is_empty() || t < self.t_start - slack || t > end + slack {
            return Err(Error::OutsideGrid { t, start: self.t_start, end });
        }
        Ok(())
    }

    pub fn nearest_index(&self, t: f64) -> Result<usize> {
        self.check_inside(t)?;
        Ok((((t - self.t_start) / self.delta).round().max(0.0) as usize).min(self.len() - 1))
    }

    /// Index `i` and weight `θ` with `t = t_i + θΔ`, `0 ≤ θ < 1`, `i + 1 < n`.
    pub(crate) fn bracket(&self, t: f64) -> Result<(usize, f64)> {
        self.check_inside(t)?;
        if self.len() < 2 {
            return Ok((0, 0.0));
        }
        let x = ((t - self.t_start) / self.delta).max(0.0);
        let i = (x.floor() as usize).min(self.len() - 2);
        Ok((i, (x - i as f64).clamp(0.0, 1.0)))
    }

    /// Linear interpolation at `t`.
    pub fn interpolate(&self, t: f64) -> Result<Complex64> {
        let (i, theta) = self.bracket(t)?;
        if self.len() < 2 {
            return Ok(self.values[0]);
        }
        Ok(self.values[i] * (1.0 - theta) + self.values[i + 1] * theta)
    }

    /// Bilinear pairing `Δ·Σ_k u_k v_k` (no conjugation).
    pub fn inner(&self, other: &SampledPath) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<Complex64>() * self.delta)
    }

    /// Squared norm `Δ·Σ_k |u_k|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.delta
    }

    pub fn check_compatible(&self, other: &SampledPath) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch { expected: self.len(), got: other.len() });
        }
        if (self.delta - other.delta).abs() > 1e-12 * self.delta
            || (self.t_start - other.t_start).abs() > 1e-9 * self.delta
        {
            return Err(invalid("paths live on different grids"));
        }
        Ok(())
    }

    pub fn map_values<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self { t_start: self.t_start, delta: self.delta, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        Self { t_start: self.t_start, delta: self.delta, values }
    }

    /// Sub-path of the samples `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self { t_start: self.t(range.start), delta: self.delta, values: self.values[range].to_vec() }
    }
}

/// Length beyond which `|e^{αt}|` drops below `1e-14`.
pub fn kernel_extent(alpha: Complex64) -> f64 {
    if alpha.re == 0.0 {
        f64::INFINITY
    } else {
        (1e14f64).ln() / alpha.re.abs()
    }
}
