//! Numerical evaluation of the Lévy-Khintchine integral.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::density::{LevyDensity, LevyTriplet};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_decaying_tail, integrate_oscillatory_tail, QuadratureSpec};

/// `sin(y) − y`, accurate for small `y`.
fn sin_minus_id(y: f64) -> f64 {
    if y.abs() < 1e-2 {
        let y2 = y * y;
        -y * y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0))
    } else {
        y.sin() - y
    }
}

/// `cos(y) − 1` without cancellation.
fn cos_minus_one(y: f64) -> f64 {
    let s = (0.5 * y).sin();
    -2.0 * s * s
}

fn violation(what: &str, size: f64) -> Error {
    Error::AdmissibilityViolation(format!(
        "{what} does not converge (last chunk magnitude {size:.3e}); the Lévy density is too singular"
    ))
}

/// `∫_{0<|a|<1} g(a) v(a) da`, split by side and mapped to `a = ±e^{−u}`.
fn near_origin<G>(density: &LevyDensity, quad: &QuadratureSpec, what: &str, g: G) -> Result<Complex64>
where
    G: Fn(f64, f64) -> Complex64,
{
    let mut total = Complex64::new(0.0, 0.0);
    for s in [1.0, -1.0] {
        let integrand = |u: f64| {
            let x = (-u).exp();
            let v = density.value(s * x);
            if v == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                g(s, x) * (v * x)
            }
        };
        match integrate_decaying_tail(integrand, 0.0, 2.0, quad)? {
            Ok(est) => total += est.value,
            Err(size) => return Err(violation(what, size)),
        }
    }
    Ok(total)
}

/// `∫_{|a|>1} v(a) h(|a|) da` for the side `s`, mapped to `a = s·e^u`.
fn far_mass(density: &LevyDensity, s: f64, quad: &QuadratureSpec, power: f64) -> Result<std::result::Result<f64, f64>> {
    let integrand = |u: f64| {
        let x = u.exp();
        Complex64::new(density.value(s * x) * x.powf(1.0 + power), 0.0)
    };
    Ok(integrate_decaying_tail(integrand, 0.0, 2.0, quad)?.map(|e| e.value.re))
}

/// Compensated drift `b1' = b1 + ∫_{|a|<1} a v(a) da`.
pub fn compensated_drift(triplet: &LevyTriplet, quad: &QuadratureSpec) -> Result<f64> {
    if triplet.density.is_symmetric() {
        return Ok(triplet.b1);
    }
    let shift = near_origin(&triplet.density, quad, "first moment of the Lévy density near 0", |s, x| {
        Complex64::new(s * x, 0.0)
    })?;
    Ok(triplet.b1 + shift.re)
}

/// `∫ |a|^p v(a) da` over `|a| > 1`; `None` when it diverges.
pub fn tail_moment(density: &LevyDensity, p: f64, quad: &QuadratureSpec) -> Result<Option<f64>> {
    let mut total = 0.0;
    for s in [1.0, -1.0] {
        match far_mass(density, s, quad, p)? {
            Ok(m) => total += m,
            Err(_) => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// `∫ a² v(a) da`, the variance of the jump part; `None` when infinite.
pub fn jump_variance(density: &LevyDensity, quad: &QuadratureSpec) -> Result<Option<f64>> {
    let near = match near_origin(density, quad, "second moment near 0", |_, x| Complex64::new(x * x, 0.0)) {
        Ok(v) => v.re,
        Err(Error::AdmissibilityViolation(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(tail_moment(density, 2.0, quad)?.map(|t| t + near))
}

/// Admissibility integral `∫ min(1, a²) v(a) da`.
pub fn admissibility_integral(density: &LevyDensity, quad: &QuadratureSpec) -> Result<f64> {
    let near = near_origin(density, quad, "∫ min(1, a²) v(a) da near 0", |_, x| Complex64::new(x * x, 0.0))?;
    let mut far = 0.0;
    for s in [1.0, -1.0] {
        match far_mass(density, s, quad, 0.0)? {
            Ok(m) => far += m,
            Err(size) => return Err(violation("∫ v(a) da over |a| > 1", size)),
        }
    }
    Ok(near.re + far)
}

/// Jump integral of a Poisson density, whose support is effectively compact.
fn poisson_jumps(triplet: &LevyTriplet, omega: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    let LevyDensity::Poisson { rate, amplitude } = &triplet.density else {
        unreachable!("caller checks the density tag")
    };
    if *rate == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (lo, hi) = amplitude.effective_support();
    // pieces of about two oscillation periods keep the adaptive rule cheap
    let piece = (4.0 * PI / omega.abs()).min(hi - lo);
    let count = ((hi - lo) / piece).ceil().max(1.0) as usize;
    let step = (hi - lo) / count as f64;
    let piece_quad = QuadratureSpec { abs_tol: quad.abs_tol / count as f64, ..*quad };
    let integrand = |a: f64| Complex64::new(cos_minus_one(a * omega), (a * omega).sin()) * (rate * amplitude.pdf(a));
    let mut edges: Vec<f64> = (0..=count).map(|i| lo + step * i as f64).collect();
    for extra in [-1.0, 0.0, 1.0] {
        if extra > lo && extra < hi {
            edges.push(extra);
        }
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut total = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        total += integrate(integrand, w[0], w[1], &piece_quad)?.value;
    }
    if triplet.uses_compensated_form {
        // drift compensation is folded into b1' by the caller
        let first = integrate(|a| Complex64::new(a * rate * amplitude.pdf(a), 0.0), -1.0, 1.0, quad)?.value.re;
        total -= Complex64::new(0.0, omega * first);
    }
    Ok(total)
}

/// Numerical value of the Lévy exponent defined by `triplet` at `omega`.
///
/// With `uses_compensated_form` the integrand is `e^{jaω} − 1 − jaω·1_{|a|<1}`
/// and the drift is `b1'`; otherwise it is `e^{jaω} − 1` with drift `b1`.
/// Densities not integrable against the chosen integrand near 0 yield
/// [`Error::AdmissibilityViolation`].
pub fn levy_khintchine(triplet: &LevyTriplet, omega: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    if omega == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let gaussian = Complex64::new(-0.5 * triplet.b2 * omega * omega, 0.0);
    let compensated = triplet.uses_compensated_form;
    let drift = if compensated { compensated_drift(triplet, quad)? } else { triplet.b1 };
    let base = gaussian + Complex64::new(0.0, drift * omega);
    let density = &triplet.density;
    let jumps = match density {
        LevyDensity::None => Complex64::new(0.0, 0.0),
        LevyDensity::Poisson { .. } => poisson_jumps(triplet, omega, quad)?,
        _ => {
            let near = near_origin(density, quad, "Lévy-Khintchine integral near 0", |s, x| {
                let y = x * omega;
                let im = if compensated { sin_minus_id(y) } else { y.sin() };
                Complex64::new(cos_minus_one(y), s * im)
            })?;
            let mut far = Complex64::new(0.0, 0.0);
            for s in [1.0, -1.0] {
                let mass = match far_mass(density, s, quad, 0.0)? {
                    Ok(m) => m,
                    Err(size) => return Err(violation("∫ v(a) da over |a| > 1", size)),
                };
                if mass.abs() < quad.abs_tol * 1e-3 {
                    continue;
                }
                let osc = integrate_oscillatory_tail(|x| density.value(s * x), s * omega, 1.0, quad)?;
                far += osc.value - mass;
            }
            near + far
        }
    };
    Ok(base + jumps)
}
