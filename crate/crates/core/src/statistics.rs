//! Exact (quadrature-based) statistics of `s = L^{-1}w`: characteristic
//! forms, first-order densities, second-order moments and wavelet-domain
//! laws.
//!
//! Every integral `∫ f(u(t)) dt` is a Riemann sum `Δ·Σ f(u_k)` on the grid of
//! the test function; the summands vanish outside the support of `u`. Dirac
//! test functions are `1/Δ`-scaled single cells, so δ-based quantities are
//! accurate to `O(Δ)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::id_laws::{
    pdf_from_exponent, AmplitudeGrid, CharGrid, ExponentKind, InversionOptions, LevyExponent, PdfInversion,
};
use crate::operators::{apply_chain, factorize, Factor, OperatorChain, SampledPath, SystemSpec};
use crate::wavelets::WaveletBasis;

/// Largest relative imaginary part tolerated in a kernel that should be real.
const REAL_TOLERANCE: f64 = 1e-6;

/// What a [`TestFunction`] was built from.
#[derive(Debug, Clone, PartialEq)]
pub enum TestTag {
    Rect { start: f64, end: f64 },
    Delta { t: f64 },
    Wavelet { level: usize, shift: usize },
    Custom,
}

/// A compactly supported test function sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub path: SampledPath,
    pub tag: TestTag,
}

impl TestFunction {
    pub fn custom(path: SampledPath) -> Self {
        Self { path, tag: TestTag::Custom }
    }

    /// `1_{[start, end)}` sampled at the grid points in that interval.
    pub fn rect(start: f64, end: f64, delta: f64) -> Result<Self> {
        if !(end > start) {
            return Err(invalid(format!("empty interval [{start}, {end})")));
        }
        let n = ((end - start) / delta - 1e-9).ceil().max(1.0) as usize;
        let path = SampledPath::new(start, delta, vec![Complex64::new(1.0, 0.0); n])?;
        Ok(Self { path, tag: TestTag::Rect { start, end } })
    }

    /// `δ(· − t)` as a single cell of height `1/delta`.
    pub fn delta_at(t: f64, delta: f64) -> Result<Self> {
        Ok(Self { path: SampledPath::dirac(t, delta, 1, t)?, tag: TestTag::Delta { t } })
    }

    pub fn wavelet(basis: &WaveletBasis, level: usize, shift: usize) -> Result<Self> {
        Ok(Self { path: basis.wavelet(level, shift)?, tag: TestTag::Wavelet { level, shift } })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { path: self.path.map_values(|v| v * c), tag: self.tag.clone() }
    }
}

/// Cells to add on each side of a grid so that applying `chain` (in its
/// direction) loses nothing above `1e-14`.
fn padding(chain: &OperatorChain, path: &SampledPath) -> (usize, usize) {
    let adjoint = chain.direction == crate::operators::Direction::Adjoint;
    let (mut left, mut right) = (0.0, 0.0);
    for f in &chain.factors {
        match f {
            Factor::StableInverse(a) => {
                let e = crate::operators::kernel_extent(*a);
                if adjoint {
                    left += e
                } else {
                    right += e
                }
            }
            Factor::AntiCausalInverse(a) => {
                let e = crate::operators::kernel_extent(*a);
                if adjoint {
                    right += e
                } else {
                    left += e
                }
            }
            Factor::Differential(b) => {
                left += b.len() as f64 * path.delta;
                right += b.len() as f64 * path.delta;
            }
            Factor::CorrectedIntegrator { .. } => {}
        }
    }
    let (mut lo, mut hi) = (path.t_start, path.t_end());
    if let Some((a, b)) = chain.boundary_span() {
        lo = lo.min(a);
        hi = hi.max(b);
    }
    let cells = |x: f64| (x / path.delta - 1e-9).ceil().max(0.0) as usize;
    // integrators also spread mass to the far side of the kernel
    let extra = usize::from(chain.has_integrators());
    (cells(path.t_start - lo + left) + extra, cells(hi - path.t_end() + right) + extra)
}

fn pad(path: &SampledPath, left: usize, right: usize) -> SampledPath {
    let mut values = vec![Complex64::new(0.0, 0.0); left];
    values.extend_from_slice(&path.values);
    values.resize(left + path.len() + right, Complex64::new(0.0, 0.0));
    SampledPath { t_start: path.t_start - left as f64 * path.delta, delta: path.delta, values }
}

fn apply_padded(chain: &OperatorChain, phi: &SampledPath) -> Result<SampledPath> {
    let (left, right) = padding(chain, phi);
    apply_chain(chain, &pad(phi, left, right))
}

/// `L^{-1*}φ` on a grid padded to hold its whole support.
pub fn adjoint_response(system: &SystemSpec, phi: &SampledPath) -> Result<SampledPath> {
    apply_padded(&factorize(system).adjoint(), phi)
}

/// Impulse response `ρ_L = L^{-1}δ` on a grid of spacing `delta` around 0.
pub fn impulse_response(system: &SystemSpec, delta: f64) -> Result<SampledPath> {
    apply_padded(&factorize(system), &SampledPath::dirac(0.0, delta, 1, 0.0)?)
}

fn real_kernel(u: &SampledPath) -> Result<Vec<f64>> {
    let r = u.relative_imaginary();
    if r > REAL_TOLERANCE {
        return Err(Error::UnsupportedSystem(format!(
            "kernel is complex (relative imaginary part {r:.2e}); real-valued noise needs a real kernel"
        )));
    }
    Ok(u.real())
}

/// The exponent `ω ↦ Δ·Σ_k f(ω·u_k)` of `⟨w, u⟩` for a sampled kernel `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelExponent {
    pub exponent: LevyExponent,
    /// Nonzero kernel values.
    pub weights: Vec<f64>,
    pub delta: f64,
    /// Distinct weights with multiplicities.
    groups: Vec<(f64, f64)>,
    /// `Δ·Σ|u_k|^p` for the index `p` of a homogeneous law.
    homogeneous: Option<f64>,
}

impl KernelExponent {
    pub fn new(exponent: &LevyExponent, kernel: &SampledPath) -> Result<Self> {
        let weights: Vec<f64> = real_kernel(kernel)?.into_iter().filter(|w| *w != 0.0).collect();
        let mut sorted = weights.clone();
        sorted.sort_by(f64::total_cmp);
        let mut groups: Vec<(f64, f64)> = Vec::new();
        for w in sorted {
            match groups.last_mut() {
                Some((v, count)) if *v == w => *count += 1.0,
                _ => groups.push((w, 1.0)),
            }
        }
        let mut k = Self { exponent: exponent.clone(), weights, delta: kernel.delta, groups, homogeneous: None };
        k.homogeneous = match exponent.kind {
            ExponentKind::Gaussian { .. } => Some(k.power_sum(2.0)),
            ExponentKind::Sas { alpha } => Some(k.power_sum(alpha)),
            _ => None,
        };
        Ok(k)
    }

    fn power_sum(&self, p: f64) -> f64 {
        self.delta * self.weights.iter().map(|w| w.abs().powf(p)).sum::<f64>()
    }

    /// `‖u‖_{L_p}^p`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.power_sum(p).powf(1.0 / p)
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if omega == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // homogeneous laws collapse to a single norm
        if let Some(norm) = self.homogeneous {
            return Ok(self.exponent.eval(omega)? * norm);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &(w, count) in &self.groups {
            acc += self.exponent.eval(omega * w)? * count;
        }
        Ok(acc * self.delta)
    }
}

/// `E[e^{j⟨s, φ⟩}] = exp(∫ f(L^{-1*}φ(t)) dt)`.
pub fn char_form(system: &SystemSpec, exponent: &LevyExponent, phi: &TestFunction) -> Result<Complex64> {
    let u = adjoint_response(system, &phi.path)?;
    Ok(KernelExponent::new(exponent, &u)?.eval(1.0)?.exp())
}

/// Exponent of the marginal law of `s(t)`: `g(ω) = ∫ f(ω·h_t(τ)) dτ` with
/// `h_t = L^{-1*}δ(· − t)`.
pub fn marginal_exponent(system: &SystemSpec, exponent: &LevyExponent, t: f64, delta: f64) -> Result<KernelExponent> {
    let h = adjoint_response(system, &TestFunction::delta_at(t, delta)?.path)?;
    KernelExponent::new(exponent, &h)
}

/// Density of `s(t)` on `out`.
pub fn first_order_pdf(
    system: &SystemSpec,
    exponent: &LevyExponent,
    t: f64,
    delta: f64,
    out: &AmplitudeGrid,
    opts: &InversionOptions,
) -> Result<PdfInversion> {
    let g = marginal_exponent(system, exponent, t, delta)?;
    pdf_from_exponent(|w| g.eval(w), out, opts)
}

/// `σ0² = b2 + ∫ a² v(a) da`; errors for infinite-variance noise.
pub fn noise_variance(exponent: &LevyExponent) -> Result<f64> {
    if !exponent.moment_finite(2.0)? {
        return Err(Error::UnsupportedLaw(format!("{} has infinite variance", exponent.label())));
    }
    exponent.variance()
}

/// `σ0²·⟨L^{-1*}φ1, conj(L^{-1*}φ2)⟩`.
pub fn covariance_form(
    system: &SystemSpec,
    exponent: &LevyExponent,
    phi1: &TestFunction,
    phi2: &TestFunction,
) -> Result<Complex64> {
    let var = noise_variance(exponent)?;
    phi1.path.check_compatible(&phi2.path)?;
    let u1 = adjoint_response(system, &phi1.path)?;
    let u2 = adjoint_response(system, &phi2.path)?;
    Ok(u1.inner(&u2.map_values(|v| v.conj()))? * var)
}

fn raw_autocorrelation(system: &SystemSpec, delta: f64, lags: usize, stride: usize) -> Result<Vec<f64>> {
    let rho = impulse_response(system, delta)?.values;
    (0..=lags)
        .map(|m| {
            let shift = m * stride;
            let s: Complex64 = rho.iter().skip(shift).zip(&rho).map(|(a, b)| a * b.conj()).sum();
            Ok(delta * s.re)
        })
        .collect()
}

/// `r_s(τ) = σ0²·∫ ρ_L(t+τ)·conj(ρ_L(t)) dt` at `τ = mΔ`, `m = 0..=lags`.
///
/// The grid sums are evaluated at `Δ`, `Δ/2` and `Δ/4` and combined by
/// two Richardson steps (orders 1 and 2), removing the leading
/// discretization errors of the sampled Dirac input.
pub fn autocorrelation(system: &SystemSpec, exponent: &LevyExponent, delta: f64, lags: usize) -> Result<SampledPath> {
    if !system.is_stationary() {
        return Err(Error::UnsupportedSystem("autocorrelation needs a stationary system (no imaginary poles)".into()));
    }
    let var = noise_variance(exponent)?;
    let r1 = raw_autocorrelation(system, delta, lags, 1)?;
    let r2 = raw_autocorrelation(system, delta / 2.0, lags, 2)?;
    let r4 = raw_autocorrelation(system, delta / 4.0, lags, 4)?;
    let values = (0..=lags)
        .map(|m| {
            let a = 2.0 * r2[m] - r1[m];
            let b = 2.0 * r4[m] - r2[m];
            Complex64::new(var * (4.0 * b - a) / 3.0, 0.0)
        })
        .collect();
    SampledPath::new(0.0, delta, values)
}

/// `Φ_s(ω) = σ0²/|L̂(−ω)|²`.
pub fn power_spectrum(system: &SystemSpec, exponent: &LevyExponent, omegas: &[f64]) -> Result<CharGrid> {
    if !system.is_stationary() {
        return Err(Error::UnsupportedSystem("power spectrum needs a stationary system (no imaginary poles)".into()));
    }
    let var = noise_variance(exponent)?;
    CharGrid::sample(omegas.to_vec(), |w| Ok(Complex64::new(var / system.frequency_response(-w).norm_sqr(), 0.0)))
}

/// `Φ(ω) ≈ ∫ r(τ) e^{−jωτ} dτ` from one-sided samples of an even `r`
/// (trapezoid rule).
pub fn spectrum_from_autocorrelation(r: &SampledPath, omegas: &[f64]) -> Vec<f64> {
    omegas
        .iter()
        .map(|&w| {
            let sum: f64 =
                r.values.iter().enumerate().skip(1).map(|(m, v)| v.re * (w * m as f64 * r.delta).cos()).sum();
            r.delta * (r.values[0].re + 2.0 * sum)
        })
        .collect()
}

/// `f_φ(ω) = ∫ f(ω·φ(t)) dt`.
pub fn wavelet_exponent(exponent: &LevyExponent, kernel: &SampledPath, omega: f64) -> Result<Complex64> {
    KernelExponent::new(exponent, kernel)?.eval(omega)
}

/// `exp(∫ f(ω1·φ_{i1,k1} + ω2·φ_{i2,k2}))` for kernels of `basis`.
pub fn joint_wavelet_char(
    exponent: &LevyExponent,
    basis: &WaveletBasis,
    first: (usize, usize),
    second: (usize, usize),
    omega1: f64,
    omega2: f64,
) -> Result<Complex64> {
    let k1 = basis.kernel(first.0, first.1)?;
    let k2 = basis.kernel(second.0, second.1)?;
    let sum = k1.with_values(k1.values.iter().zip(&k2.values).map(|(a, b)| a * omega1 + b * omega2).collect());
    Ok(KernelExponent::new(exponent, &sum)?.eval(1.0)?.exp())
}

/// `e^{f(ω)}` on `omegas`: the law of unit-lag increments.
pub fn increment_char(exponent: &LevyExponent, omegas: &[f64]) -> Result<CharGrid> {
    CharGrid::sample(omegas.to_vec(), |w| Ok(exponent.eval(w)?.exp()))
}

/// Uniform symmetric frequency axis `[−w_max, w_max]` with `n` points.
pub fn frequency_axis(w_max: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n).map(|k| -w_max + 2.0 * w_max * k as f64 / (n - 1) as f64).collect()
}

/// Angular frequencies `2πk/(nΔ)` up to Nyquist.
pub fn rfft_frequencies(n: usize, delta: f64) -> Vec<f64> {
    (0..=n / 2).map(|k| 2.0 * PI * k as f64 / (n as f64 * delta)).collect()
}
