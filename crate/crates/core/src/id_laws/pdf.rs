//! Characteristic-function grids and their inversion to densities.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridDomain {
    Frequency,
    Amplitude,
}

/// Samples on a uniform grid symmetric about 0.
///
/// In the frequency domain `values` are characteristic-function or exponent
/// samples; in the amplitude domain they are real density values stored with a
/// zero imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct CharGrid {
    pub axis: Vec<f64>,
    pub values: Vec<Complex64>,
    pub domain: GridDomain,
}

impl CharGrid {
    pub fn new(axis: Vec<f64>, values: Vec<Complex64>, domain: GridDomain) -> Result<Self> {
        if axis.len() != values.len() {
            return Err(crate::error::Error::ShapeMismatch { expected: axis.len(), got: values.len() });
        }
        Ok(Self { axis, values, domain })
    }

    /// Samples `g` on `axis` in the frequency domain.
    pub fn sample<G>(axis: Vec<f64>, g: G) -> Result<Self>
    where
        G: Fn(f64) -> Result<Complex64>,
    {
        let values = axis.iter().map(|&w| g(w)).collect::<Result<Vec<_>>>()?;
        Ok(Self { axis, values, domain: GridDomain::Frequency })
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    /// Spacing of a uniform axis, or `None` for fewer than two points.
    pub fn spacing(&self) -> Option<f64> {
        (self.axis.len() >= 2).then(|| self.axis[1] - self.axis[0])
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// CSV with columns `(axis, re, im)` for frequency grids and `(x, pdf)`
    /// for amplitude grids.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.domain {
            GridDomain::Frequency => {
                out.push_str("axis,re,im\n");
                for (w, v) in self.axis.iter().zip(&self.values) {
                    let _ = writeln!(out, "{w},{},{}", v.re, v.im);
                }
            }
            GridDomain::Amplitude => {
                out.push_str("x,pdf\n");
                for (x, v) in self.axis.iter().zip(&self.values) {
                    let _ = writeln!(out, "{x},{}", v.re);
                }
            }
        }
        out
    }

    fn check_symmetric_uniform(&self) -> Result<f64> {
        let n = self.axis.len();
        if n < 2 {
            return Err(invalid("grid needs at least two points"));
        }
        let step = self.axis[1] - self.axis[0];
        if !(step > 0.0) {
            return Err(invalid("grid axis must be increasing"));
        }
        for (i, &a) in self.axis.iter().enumerate() {
            let expected = self.axis[0] + step * i as f64;
            if (a - expected).abs() > 1e-9 * step.max(expected.abs()) {
                return Err(invalid("grid axis must be uniform"));
            }
        }
        if (self.axis[0] + self.axis[n - 1]).abs() > 1e-9 * step {
            return Err(invalid("grid axis must be symmetric about 0"));
        }
        Ok(step)
    }
}

/// Output grid `x_m = m·step`, `m = −half_len..=half_len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeGrid {
    pub step: f64,
    pub half_len: usize,
}

impl AmplitudeGrid {
    pub fn new(step: f64, half_len: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(invalid(format!("amplitude step must be positive, got {step}")));
        }
        Ok(Self { step, half_len })
    }

    /// Grid covering `[−x_max, x_max]` with the given step.
    pub fn covering(x_max: f64, step: f64) -> Result<Self> {
        Self::new(step, (x_max / step).round() as usize)
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.half_len as i64;
        (-h..=h).map(|m| m as f64 * self.step).collect()
    }

    pub fn x_max(&self) -> f64 {
        self.half_len as f64 * self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowPolicy {
    /// Never taper the characteristic function.
    #[default]
    Never,
    /// Taper only when the characteristic function has not decayed at the
    /// grid edge.
    Auto,
    Always,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    pub window: WindowPolicy,
    /// Edge magnitude `|e^{f}|` above which truncation is reported.
    pub edge_threshold: f64,
    /// Minimum period of the internal FFT grid (controls aliasing of tails).
    pub min_period: f64,
    /// Largest oversampling factor between output and internal grids.
    pub max_refinement: usize,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self { window: WindowPolicy::Never, edge_threshold: 1e-12, min_period: 2000.0, max_refinement: 64 }
    }
}

/// A density recovered from a characteristic function, with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfInversion {
    pub pdf: CharGrid,
    /// `1 −` total mass after clipping negative values (over the internal grid
    /// when the FFT path is used, over the output grid otherwise).
    pub mass_defect: f64,
    /// Most negative density value before clipping (0 if none).
    pub min_value: f64,
    pub windowed: bool,
    /// The characteristic function had not decayed below the edge threshold.
    pub alias_warning: bool,
    pub edge_magnitude: f64,
}

fn raised_cosine(w: f64, w_max: f64) -> f64 {
    0.5 * (1.0 + (PI * w / w_max).cos())
}

fn finish(axis: Vec<f64>, mut raw: Vec<f64>, step: f64, internal_mass: Option<f64>) -> (CharGrid, f64, f64) {
    let min_value = raw.iter().copied().fold(0.0, f64::min);
    for v in raw.iter_mut() {
        *v = v.max(0.0);
    }
    let mass = internal_mass.unwrap_or_else(|| raw.iter().sum::<f64>() * step);
    let values = raw.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    (CharGrid { axis, values, domain: GridDomain::Amplitude }, 1.0 - mass, min_value)
}

/// Inverts sampled exponent values `f(ω_k)` to the density of the law with
/// characteristic function `e^{f}`, on `out`.
///
/// The samples must lie on a uniform grid symmetric about 0; the inverse
/// Fourier integral is evaluated as a direct Riemann sum, which is exact up to
/// aliasing at period `2π/Δω` and truncation at the grid edge.
pub fn char_to_pdf(exponent_samples: &CharGrid, out: &AmplitudeGrid, opts: &InversionOptions) -> Result<PdfInversion> {
    if exponent_samples.domain != GridDomain::Frequency {
        return Err(invalid("char_to_pdf expects frequency-domain samples"));
    }
    let dw = exponent_samples.check_symmetric_uniform()?;
    let w_max = exponent_samples.axis.last().copied().unwrap_or(0.0);
    let chars: Vec<Complex64> = exponent_samples.values.iter().map(|f| f.exp()).collect();
    let edge_magnitude = chars[0].norm().max(chars[chars.len() - 1].norm());
    let alias_warning = edge_magnitude > opts.edge_threshold;
    let windowed = match opts.window {
        WindowPolicy::Never => false,
        WindowPolicy::Auto => alias_warning,
        WindowPolicy::Always => true,
    };
    let weighted: Vec<(f64, Complex64)> = exponent_samples
        .axis
        .iter()
        .zip(&chars)
        .map(|(&w, &c)| {
            let taper = if windowed { raised_cosine(w, w_max * (1.0 + 1e-12)) } else { 1.0 };
            (w, c * taper)
        })
        .collect();
    let axis = out.axis();
    let raw: Vec<f64> = axis
        .iter()
        .map(|&x| {
            let s: f64 = weighted
                .iter()
                .map(|&(w, c)| {
                    let (sn, cs) = (w * x).sin_cos();
                    // Re{c·e^{−jωx}}
                    c.re * cs + c.im * sn
                })
                .sum();
            s * dw / (2.0 * PI)
        })
        .collect();
    let (pdf, mass_defect, min_value) = finish(axis, raw, out.step, None);
    Ok(PdfInversion { pdf, mass_defect, min_value, windowed, alias_warning, edge_magnitude })
}

/// Inverts `e^{f}` on `out`, choosing the frequency grid automatically and
/// using a power-of-two FFT.
///
/// The internal spacing is `out.step/r` with the smallest `r ≤ max_refinement`
/// for which `|e^{f}|` drops below the edge threshold at the Nyquist frequency;
/// the period is at least `max(16·x_max, min_period)`.
pub fn pdf_from_exponent<F>(f: F, out: &AmplitudeGrid, opts: &InversionOptions) -> Result<PdfInversion>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut refinement = None;
    let mut edge = 0.0;
    for r in 1..=opts.max_refinement.max(1) {
        let nyquist = PI * r as f64 / out.step;
        edge = f(nyquist)?.exp().norm().max(f(-nyquist)?.exp().norm());
        if edge < opts.edge_threshold {
            refinement = Some(r);
            break;
        }
    }
    let alias_warning = refinement.is_none();
    let r = match refinement {
        Some(r) => r,
        None => {
            // a characteristic function that never decays (atoms) keeps the
            // output resolution; otherwise resolve as finely as allowed
            let far = f(PI * opts.max_refinement as f64 / out.step)?.exp().norm();
            let near = f(PI / out.step)?.exp().norm();
            if (far - near).abs() < 1e-3 * near.max(1e-300) {
                1
            } else {
                opts.max_refinement.max(1)
            }
        }
    };
    if !alias_warning {
        edge = f(PI * r as f64 / out.step)?.exp().norm();
    }
    let dx = out.step / r as f64;
    let period = (16.0 * out.x_max()).max(opts.min_period);
    let mut n = ((period / dx).ceil() as usize).next_power_of_two().max(4);
    while n / 2 <= out.half_len * r + 1 {
        n *= 2;
    }
    let dw = 2.0 * PI / (n as f64 * dx);
    let w_max = dw * (n / 2) as f64;
    let windowed = match opts.window {
        WindowPolicy::Never => false,
        WindowPolicy::Auto => alias_warning,
        WindowPolicy::Always => true,
    };
    let mut buf: Vec<Complex64> = Vec::with_capacity(n);
    for k in 0..n {
        let w = (k as f64 - (n / 2) as f64) * dw;
        let mut c = f(w)?.exp();
        if windowed {
            c *= raised_cosine(w, w_max);
        }
        if k % 2 == 1 {
            c = -c;
        }
        buf.push(c);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = dw / (2.0 * PI);
    let full: Vec<f64> =
        buf.iter().enumerate().map(|(i, v)| if i % 2 == 1 { -v.re * scale } else { v.re * scale }).collect();
    let internal_mass: f64 = full.iter().map(|v| v.max(0.0)).sum::<f64>() * dx;
    let internal_min = full.iter().copied().fold(0.0, f64::min);
    let h = out.half_len as i64;
    let raw: Vec<f64> = (-h..=h).map(|m| full[((n / 2) as i64 + m * r as i64) as usize]).collect();
    let (pdf, mass_defect, _) = finish(out.axis(), raw, out.step, Some(internal_mass));
    Ok(PdfInversion { pdf, mass_defect, min_value: internal_min, windowed, alias_warning, edge_magnitude: edge })
}
