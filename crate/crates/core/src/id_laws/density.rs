use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::quadrature::{integrate, QuadratureSpec};

/// Amplitude distribution of the jumps of a compound Poisson noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeLaw {
    Gaussian { mean: f64, std: f64 },
    Uniform { lo: f64, hi: f64 },
    Laplace { scale: f64 },
}

impl AmplitudeLaw {
    pub fn standard_gaussian() -> Self {
        AmplitudeLaw::Gaussian { mean: 0.0, std: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AmplitudeLaw::Gaussian { mean, std } => {
                if !mean.is_finite() || !(std > 0.0 && std.is_finite()) {
                    return Err(invalid(format!(
                        "gaussian amplitude needs finite mean and std > 0, got ({mean}, {std})"
                    )));
                }
            }
            AmplitudeLaw::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(invalid(format!("uniform amplitude needs lo < hi, got [{lo}, {hi}]")));
                }
            }
            AmplitudeLaw::Laplace { scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(invalid(format!("laplace amplitude needs scale > 0, got {scale}")));
                }
            }
        }
        Ok(())
    }

    pub fn pdf(&self, a: f64) -> f64 {
        match *self {
            AmplitudeLaw::Gaussian { mean, std } => {
                let z = (a - mean) / std;
                (-0.5 * z * z).exp() / (std * (2.0 * PI).sqrt())
            }
            AmplitudeLaw::Uniform { lo, hi } => {
                if (lo..hi).contains(&a) {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            AmplitudeLaw::Laplace { scale } => (-a.abs() / scale).exp() / (2.0 * scale),
        }
    }

    /// Characteristic function `E{e^{jωA}}`.
    pub fn char_fn(&self, omega: f64) -> Complex64 {
        match *self {
            AmplitudeLaw::Gaussian { mean, std } => {
                Complex64::new(-0.5 * std * std * omega * omega, mean * omega).exp()
            }
            AmplitudeLaw::Uniform { lo, hi } => {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let x = omega * half;
                let sinc = if x.abs() < 1e-4 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                Complex64::from_polar(sinc, omega * mid)
            }
            AmplitudeLaw::Laplace { scale } => Complex64::new(1.0 / (1.0 + scale * scale * omega * omega), 0.0),
        }
    }

    /// Derivative of the characteristic function with respect to ω.
    pub fn char_fn_deriv(&self, omega: f64) -> Complex64 {
        match *self {
            AmplitudeLaw::Gaussian { mean, std } => Complex64::new(-std * std * omega, mean) * self.char_fn(omega),
            AmplitudeLaw::Uniform { lo, hi } => {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let x = omega * half;
                let (sinc, dsinc) = if x.abs() < 1e-4 {
                    (1.0 - x * x / 6.0, -x / 3.0)
                } else {
                    (x.sin() / x, (x * x.cos() - x.sin()) / (x * x))
                };
                let phase = Complex64::from_polar(1.0, omega * mid);
                phase * (Complex64::new(dsinc * half, 0.0) + Complex64::new(0.0, mid) * sinc)
            }
            AmplitudeLaw::Laplace { scale } => {
                let s2 = scale * scale;
                let d = 1.0 + s2 * omega * omega;
                Complex64::new(-2.0 * s2 * omega / (d * d), 0.0)
            }
        }
    }

    pub fn second_moment(&self) -> f64 {
        match *self {
            AmplitudeLaw::Gaussian { mean, std } => mean * mean + std * std,
            AmplitudeLaw::Uniform { lo, hi } => (lo * lo + lo * hi + hi * hi) / 3.0,
            AmplitudeLaw::Laplace { scale } => 2.0 * scale * scale,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match *self {
            AmplitudeLaw::Gaussian { mean, .. } => mean == 0.0,
            AmplitudeLaw::Uniform { lo, hi } => lo == -hi,
            AmplitudeLaw::Laplace { .. } => true,
        }
    }

    /// Interval outside of which the density is negligible (or zero).
    pub(crate) fn effective_support(&self) -> (f64, f64) {
        match *self {
            AmplitudeLaw::Gaussian { mean, std } => (mean - 40.0 * std, mean + 40.0 * std),
            AmplitudeLaw::Uniform { lo, hi } => (lo, hi),
            AmplitudeLaw::Laplace { scale } => (-800.0 * scale, 800.0 * scale),
        }
    }

    /// Numerical mass of the density; 1 up to quadrature error.
    pub fn total_mass(&self, quad: &QuadratureSpec) -> Result<f64> {
        let (lo, hi) = self.effective_support();
        let mut points = vec![lo, hi];
        match *self {
            AmplitudeLaw::Gaussian { mean, .. } => points.push(mean),
            AmplitudeLaw::Laplace { .. } => points.push(0.0),
            AmplitudeLaw::Uniform { .. } => {}
        }
        points.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in points.windows(2) {
            total += integrate(|a| Complex64::new(self.pdf(a), 0.0), w[0], w[1], quad)?.value.re;
        }
        Ok(total)
    }
}

/// A user-supplied Lévy density `v(a)`.
#[derive(Clone)]
pub struct CustomDensity {
    pub name: String,
    pub func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Declares `v(−a) = v(a)`; enables principal-value handling of the drift.
    pub symmetric: bool,
}

impl CustomDensity {
    pub fn new(name: impl Into<String>, symmetric: bool, func: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), func: Arc::new(func), symmetric }
    }
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("name", &self.name)
            .field("symmetric", &self.symmetric)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomDensity {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.symmetric == other.symmetric && Arc::ptr_eq(&self.func, &other.func)
    }
}

/// The jump part of a Lévy triplet.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyDensity {
    None,
    /// `v(a) = rate · p_A(a)`.
    Poisson {
        rate: f64,
        amplitude: AmplitudeLaw,
    },
    /// `v(a) = e^{−|a|}/|a|`.
    Laplace,
    /// `v(a) = C_α/|a|^{1+α}` with `C_α = sin(πα/2)/π`.
    Sas {
        alpha: f64,
    },
    Custom(CustomDensity),
}

/// Normalization of the SαS Lévy density.
pub fn sas_constant(alpha: f64) -> f64 {
    (PI * alpha / 2.0).sin() / PI
}

impl LevyDensity {
    /// Evaluates `v(a)` for `a ≠ 0`.
    pub fn value(&self, a: f64) -> f64 {
        match self {
            LevyDensity::None => 0.0,
            LevyDensity::Poisson { rate, amplitude } => rate * amplitude.pdf(a),
            LevyDensity::Laplace => (-a.abs()).exp() / a.abs(),
            LevyDensity::Sas { alpha } => sas_constant(*alpha) * a.abs().powf(-1.0 - alpha),
            LevyDensity::Custom(c) => (c.func)(a),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            LevyDensity::None | LevyDensity::Laplace | LevyDensity::Sas { .. } => true,
            LevyDensity::Poisson { amplitude, .. } => amplitude.is_symmetric(),
            LevyDensity::Custom(c) => c.symmetric,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LevyDensity::Poisson { rate, amplitude } => {
                if !(*rate >= 0.0 && rate.is_finite()) {
                    return Err(invalid(format!("poisson rate must be finite and ≥ 0, got {rate}")));
                }
                amplitude.validate()
            }
            LevyDensity::Sas { alpha } => {
                if !(*alpha > 0.0 && *alpha <= 2.0) {
                    return Err(invalid(format!("stability index must lie in (0, 2], got {alpha}")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Lévy triplet `(b1, b2, v)`.
///
/// `b1` is the drift of the uncompensated representation
/// `f(ω) = j b1 ω − b2 ω²/2 + ∫(e^{jaω} − 1) v(a) da`; the compensated drift is
/// `b1' = b1 + ∫_{|a|<1} a v(a) da`. `uses_compensated_form` selects which
/// integral is evaluated numerically; the uncompensated one only exists when
/// `∫_{|a|<1} |a| v(a) da` is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyTriplet {
    pub b1: f64,
    pub b2: f64,
    pub density: LevyDensity,
    pub uses_compensated_form: bool,
}

impl LevyTriplet {
    pub fn new(b1: f64, b2: f64, density: LevyDensity) -> Result<Self> {
        if !b1.is_finite() {
            return Err(invalid(format!("drift must be finite, got {b1}")));
        }
        if !(b2 >= 0.0 && b2.is_finite()) {
            return Err(invalid(format!("Gaussian variance b2 must be finite and ≥ 0, got {b2}")));
        }
        density.validate()?;
        Ok(Self { b1, b2, density, uses_compensated_form: true })
    }

    pub fn with_compensated_form(mut self, compensated: bool) -> Self {
        self.uses_compensated_form = compensated;
        self
    }

    pub fn gaussian() -> Self {
        Self { b1: 0.0, b2: 1.0, density: LevyDensity::None, uses_compensated_form: true }
    }

    pub fn laplace() -> Self {
        Self { b1: 0.0, b2: 0.0, density: LevyDensity::Laplace, uses_compensated_form: true }
    }

    pub fn sas(alpha: f64) -> Self {
        Self { b1: 0.0, b2: 0.0, density: LevyDensity::Sas { alpha }, uses_compensated_form: true }
    }

    pub fn poisson(rate: f64, amplitude: AmplitudeLaw) -> Self {
        Self { b1: 0.0, b2: 0.0, density: LevyDensity::Poisson { rate, amplitude }, uses_compensated_form: true }
    }
}
