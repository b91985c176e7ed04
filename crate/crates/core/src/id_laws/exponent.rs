use num_complex::Complex64;

use super::density::{AmplitudeLaw, LevyDensity, LevyTriplet};
use super::khintchine::{jump_variance, levy_khintchine, tail_moment};
use crate::error::{invalid, Error, Result};
use crate::quadrature::QuadratureSpec;

/// Closed-form tag of a Lévy exponent, or a triplet evaluated by quadrature.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentKind {
    /// `−variance·ω²/2`.
    Gaussian {
        variance: f64,
    },
    /// `−|ω|^α/Γ(α+1)`.
    Sas {
        alpha: f64,
    },
    /// `rate·(E{e^{jωA}} − 1)`.
    Poisson {
        rate: f64,
        amplitude: AmplitudeLaw,
    },
    /// `−ln(1+ω²)`, the law with density `½e^{−|x|}`.
    Laplace,
    Numeric(LevyTriplet),
}

/// A Lévy exponent `f`, the log-characteristic function of an infinitely
/// divisible law.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyExponent {
    pub kind: ExponentKind,
    pub quad: QuadratureSpec,
}

impl LevyExponent {
    pub fn new(kind: ExponentKind) -> Result<Self> {
        match &kind {
            ExponentKind::Gaussian { variance } => {
                if !(*variance >= 0.0 && variance.is_finite()) {
                    return Err(invalid(format!("gaussian variance must be finite and ≥ 0, got {variance}")));
                }
            }
            ExponentKind::Sas { alpha } => {
                if !(*alpha > 0.0 && *alpha <= 2.0) {
                    return Err(invalid(format!("stability index must lie in (0, 2], got {alpha}")));
                }
            }
            ExponentKind::Poisson { rate, amplitude } => {
                if !(*rate >= 0.0 && rate.is_finite()) {
                    return Err(invalid(format!("poisson rate must be finite and ≥ 0, got {rate}")));
                }
                amplitude.validate()?;
            }
            ExponentKind::Laplace => {}
            ExponentKind::Numeric(t) => t.density.validate()?,
        }
        Ok(Self { kind, quad: QuadratureSpec::default() })
    }

    pub fn gaussian() -> Self {
        Self { kind: ExponentKind::Gaussian { variance: 1.0 }, quad: QuadratureSpec::default() }
    }

    pub fn laplace() -> Self {
        Self { kind: ExponentKind::Laplace, quad: QuadratureSpec::default() }
    }

    pub fn sas(alpha: f64) -> Result<Self> {
        Self::new(ExponentKind::Sas { alpha })
    }

    pub fn poisson(rate: f64, amplitude: AmplitudeLaw) -> Result<Self> {
        Self::new(ExponentKind::Poisson { rate, amplitude })
    }

    pub fn numeric(triplet: LevyTriplet) -> Result<Self> {
        Self::new(ExponentKind::Numeric(triplet))
    }

    pub fn with_quadrature(mut self, quad: QuadratureSpec) -> Self {
        self.quad = quad;
        self
    }

    /// Short tag used in logs and output files.
    pub fn label(&self) -> String {
        match &self.kind {
            ExponentKind::Gaussian { .. } => "gaussian".into(),
            ExponentKind::Sas { alpha } => format!("sas({alpha})"),
            ExponentKind::Poisson { rate, .. } => format!("poisson({rate})"),
            ExponentKind::Laplace => "laplace".into(),
            ExponentKind::Numeric(t) => match &t.density {
                LevyDensity::Custom(c) => format!("numeric({})", c.name),
                _ => "numeric".into(),
            },
        }
    }

    /// The Lévy triplet describing the same law.
    pub fn triplet(&self) -> LevyTriplet {
        match &self.kind {
            ExponentKind::Gaussian { variance } => {
                LevyTriplet { b1: 0.0, b2: *variance, density: LevyDensity::None, uses_compensated_form: true }
            }
            ExponentKind::Sas { alpha } => LevyTriplet::sas(*alpha),
            ExponentKind::Poisson { rate, amplitude } => LevyTriplet::poisson(*rate, *amplitude),
            ExponentKind::Laplace => LevyTriplet::laplace(),
            ExponentKind::Numeric(t) => t.clone(),
        }
    }

    /// `f(ω)`; closed forms are exact, numeric triplets go through quadrature.
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if omega == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(match &self.kind {
            ExponentKind::Gaussian { variance } => Complex64::new(-0.5 * variance * omega * omega, 0.0),
            ExponentKind::Sas { alpha } => Complex64::new(-omega.abs().powf(*alpha) / libm::tgamma(alpha + 1.0), 0.0),
            ExponentKind::Poisson { rate, amplitude } => (amplitude.char_fn(omega) - 1.0) * *rate,
            ExponentKind::Laplace => Complex64::new(-(omega * omega).ln_1p(), 0.0),
            ExponentKind::Numeric(t) => levy_khintchine(t, omega, &self.quad)?,
        })
    }

    /// `f'(ω)`. Closed forms are differentiated analytically; numeric
    /// exponents use a central difference with step `max(1e-6, 1e-6·|ω|)`.
    /// At `ω = 0` an SαS exponent with `α ≤ 1` has no derivative and the
    /// result is NaN.
    pub fn eval_deriv(&self, omega: f64) -> Result<Complex64> {
        Ok(match &self.kind {
            ExponentKind::Gaussian { variance } => Complex64::new(-variance * omega, 0.0),
            ExponentKind::Sas { alpha } => {
                if omega == 0.0 {
                    Complex64::new(if *alpha > 1.0 { 0.0 } else { f64::NAN }, 0.0)
                } else {
                    let g = libm::tgamma(alpha + 1.0);
                    Complex64::new(-alpha * omega.abs().powf(alpha - 1.0) * omega.signum() / g, 0.0)
                }
            }
            ExponentKind::Poisson { rate, amplitude } => amplitude.char_fn_deriv(omega) * *rate,
            ExponentKind::Laplace => Complex64::new(-2.0 * omega / (1.0 + omega * omega), 0.0),
            ExponentKind::Numeric(_) => {
                let h = (1e-6 * omega.abs()).max(1e-6);
                (self.eval(omega + h)? - self.eval(omega - h)?) / (2.0 * h)
            }
        })
    }

    /// Variance of the law, `b2 + ∫a²v(a)da`; errors for infinite-variance laws.
    pub fn variance(&self) -> Result<f64> {
        match &self.kind {
            ExponentKind::Gaussian { variance } => Ok(*variance),
            ExponentKind::Laplace => Ok(2.0),
            ExponentKind::Poisson { rate, amplitude } => Ok(rate * amplitude.second_moment()),
            ExponentKind::Sas { alpha } if *alpha == 2.0 => Ok(2.0 / libm::tgamma(3.0)),
            ExponentKind::Sas { alpha } => {
                Err(Error::UnsupportedLaw(format!("SαS law with α = {alpha} has infinite variance")))
            }
            ExponentKind::Numeric(t) => match jump_variance(&t.density, &self.quad)? {
                Some(v) => Ok(t.b2 + v),
                None => Err(Error::UnsupportedLaw(format!("{} has infinite variance", self.label()))),
            },
        }
    }

    /// Whether the law has finite moments of order `p`.
    pub fn moment_finite(&self, p: f64) -> Result<bool> {
        moment_finite(&self.triplet(), p)
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            ExponentKind::Gaussian { .. } | ExponentKind::Sas { .. } | ExponentKind::Laplace => true,
            ExponentKind::Poisson { amplitude, .. } => amplitude.is_symmetric(),
            ExponentKind::Numeric(t) => t.b1 == 0.0 && t.density.is_symmetric(),
        }
    }
}

/// Whether the law of `triplet` has a finite moment of order `p > 0`.
pub fn moment_finite(triplet: &LevyTriplet, p: f64) -> Result<bool> {
    if !(p > 0.0) {
        return Err(invalid(format!("moment order must be positive, got {p}")));
    }
    Ok(match &triplet.density {
        LevyDensity::None | LevyDensity::Laplace | LevyDensity::Poisson { .. } => true,
        LevyDensity::Sas { alpha } => *alpha == 2.0 || p < *alpha,
        density @ LevyDensity::Custom(_) => tail_moment(density, p, &QuadratureSpec::default())?.is_some(),
    })
}

/// Probability `e^{−λ}` that a compound Poisson observation is zero.
pub fn sparsity_index(rate: f64) -> Result<f64> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(invalid(format!("poisson rate must be positive and finite, got {rate}")));
    }
    Ok((-rate).exp())
}
