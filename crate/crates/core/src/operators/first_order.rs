//! First-order inverse operators on uniform grids.
//!
//! Every operator is a lower or upper triangular matrix `A` built from the
//! exact exponential recursion with trapezoid weights; the adjoint is the
//! plain transpose, so `⟨Ax, y⟩ = ⟨x, Aᵀy⟩` holds to rounding for the pairing
//! `Δ·Σ u_k v_k`. Values outside the grid are zero.

use num_complex::Complex64;

use super::path::{Direction, SampledPath};
use crate::error::{invalid, Result};

/// `y_k = r·y_{k−1} + s·(x_k + r·x_{k−1})`.
fn accumulate_forward(ratio: Complex64, scale: f64, x: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(x.len());
    let mut y = Complex64::new(0.0, 0.0);
    let mut prev = Complex64::new(0.0, 0.0);
    for &v in x {
        y = ratio * y + (v + ratio * prev) * scale;
        prev = v;
        out.push(y);
    }
    out
}

/// `y_k = r·y_{k+1} + s·(x_k + r·x_{k+1})`.
fn accumulate_backward(ratio: Complex64, scale: f64, x: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    let mut y = Complex64::new(0.0, 0.0);
    let mut next = Complex64::new(0.0, 0.0);
    for k in (0..x.len()).rev() {
        y = ratio * y + (x[k] + ratio * next) * scale;
        next = x[k];
        out[k] = y;
    }
    out
}

/// Green function of `D − α·Id`: `1_+(t)e^{αt}` when `Re α ≤ 0`, otherwise
/// `−1_+(−t)e^{αt}`. The value at `t = 0` is the right/left limit.
pub fn green_function(alpha: Complex64, t: f64) -> Complex64 {
    if alpha.re <= 0.0 {
        if t >= 0.0 {
            (alpha * t).exp()
        } else {
            Complex64::new(0.0, 0.0)
        }
    } else if t <= 0.0 {
        -(alpha * t).exp()
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// [`green_function`] sampled on a grid.
pub fn green_path(alpha: Complex64, t_start: f64, delta: f64, n: usize) -> Result<SampledPath> {
    SampledPath::from_fn(t_start, delta, n, |t| green_function(alpha, t))
}

/// `ρ_α * x` (forward) or `ρ_α^∨ * x` (adjoint) for `Re α ≠ 0`, run causally
/// or anti-causally so that the recursion always decays.
pub fn stable_inverse(alpha: Complex64, x: &SampledPath, direction: Direction) -> Result<SampledPath> {
    if alpha.re == 0.0 || !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(invalid(format!(
            "stable inverse needs Re α ≠ 0 (got {alpha}); use the corrected integrator for imaginary poles"
        )));
    }
    let d = x.delta;
    let values = if alpha.re < 0.0 {
        let r = (alpha * d).exp();
        match direction {
            Direction::Forward => accumulate_forward(r, 0.5 * d, &x.values),
            Direction::Adjoint => accumulate_backward(r, 0.5 * d, &x.values),
        }
    } else {
        let r = (-alpha * d).exp();
        match direction {
            Direction::Forward => accumulate_backward(r, -0.5 * d, &x.values),
            Direction::Adjoint => accumulate_forward(r, -0.5 * d, &x.values),
        }
    };
    Ok(x.with_values(values))
}

/// `e^{jω0t}∫_{−∞}^t e^{−jω0τ}x(τ)dτ` by cumulative trapezoid sums.
pub fn integrator(omega0: f64, x: &SampledPath) -> SampledPath {
    let r = Complex64::from_polar(1.0, omega0 * x.delta);
    x.with_values(accumulate_forward(r, 0.5 * x.delta, &x.values))
}

/// `e^{−jω0t}∫_t^{∞} e^{jω0τ}x(τ)dτ`, the transpose of [`integrator`].
pub fn integrator_adjoint(omega0: f64, x: &SampledPath) -> SampledPath {
    let r = Complex64::from_polar(1.0, omega0 * x.delta);
    x.with_values(accumulate_backward(r, 0.5 * x.delta, &x.values))
}

#[cfg(test)]
/// Multiplication by `e^{jω0t}`.
pub(crate) fn modulate(omega0: f64, x: &SampledPath) -> SampledPath {
    x.with_values(x.values.iter().enumerate().map(|(k, &v)| v * Complex64::from_polar(1.0, omega0 * x.t(k))).collect())
}

/// Interpolation weights `c` with `Σ c_k y_k ≈ y(t0)` for outputs of the
/// `ω0`-integrator; the demodulated signal is interpolated linearly, so
/// `Σ c_k e^{jω0(t_k − t0)} = 1` exactly.
fn boundary_functional(omega0: f64, t0: f64, x: &SampledPath) -> Result<[(usize, Complex64); 2]> {
    let (i, theta) = x.bracket(t0)?;
    let j = (i + 1).min(x.len() - 1);
    let ci = Complex64::from_polar(1.0 - theta, omega0 * (t0 - x.t(i)));
    let cj = Complex64::from_polar(theta, omega0 * (t0 - x.t(j)));
    Ok([(i, ci), (j, cj)])
}

/// `I_{ω0}x − e^{jω0(· − t0)}·I_{ω0}x(t0)`: the right inverse of
/// `D − jω0·Id` that vanishes at `t0`.
pub fn corrected_integrator(omega0: f64, t0: f64, x: &SampledPath) -> Result<SampledPath> {
    let c = boundary_functional(omega0, t0, x)?;
    let y = integrator(omega0, x);
    let at_t0: Complex64 = c.iter().map(|&(k, w)| w * y.values[k]).sum();
    Ok(y.with_values(
        y.values
            .iter()
            .enumerate()
            .map(|(k, &v)| v - Complex64::from_polar(1.0, omega0 * (y.t(k) - t0)) * at_t0)
            .collect(),
    ))
}

/// Adjoint of [`corrected_integrator`]:
/// `I*_{ω0}x − x̂(−ω0)e^{−jω0t0}ρ^∨_{jω0}(· − t0)`, which decays on both sides
/// of the support of `x`.
pub fn corrected_adjoint(omega0: f64, t0: f64, x: &SampledPath) -> Result<SampledPath> {
    let c = boundary_functional(omega0, t0, x)?;
    let z = integrator_adjoint(omega0, x);
    // Σ_k e^{jω0(t_k − t0)} x_k, i.e. x̂(−ω0)e^{−jω0t0}/Δ
    let moment: Complex64 =
        x.values.iter().enumerate().map(|(k, &v)| v * Complex64::from_polar(1.0, omega0 * (x.t(k) - t0))).sum();
    let mut spike = vec![Complex64::new(0.0, 0.0); x.len()];
    for (k, w) in c {
        spike[k] += w;
    }
    let r = Complex64::from_polar(1.0, omega0 * x.delta);
    let kernel = accumulate_backward(r, 0.5 * x.delta, &spike);
    Ok(z.with_values(z.values.iter().zip(&kernel).map(|(&a, &b)| a - moment * b).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bump(t_start: f64, delta: f64, n: usize, center: f64, width: f64, phase: f64) -> SampledPath {
        SampledPath::from_fn(t_start, delta, n, |t| {
            let u = (t - center) / width;
            if u.abs() < 1.0 {
                Complex64::from_polar((1.0 - u * u).powi(3), phase * t)
            } else {
                c(0.0)
            }
        })
        .unwrap()
    }

    #[test]
    fn green_function_branches() {
        assert!((green_function(c(-1.0), 1.0).re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(green_function(c(-1.0), -0.5), c(0.0));
        assert!((green_function(c(1.0), -1.0).re + (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(green_function(c(1.0), 0.5), c(0.0));
    }

    #[test]
    fn impulse_reproduces_green_function() {
        for alpha in [Complex64::new(-1.0, 2.0), Complex64::new(0.7, -0.3)] {
            let d = SampledPath::dirac(-5.0, 0.01, 1001, 0.0).unwrap();
            let y = stable_inverse(alpha, &d, Direction::Forward).unwrap();
            for k in 0..y.len() {
                let t = y.t(k);
                if t.abs() > 0.005 {
                    assert!((y.values[k] - green_function(alpha, t)).norm() < 1e-12, "{alpha} {t}");
                }
            }
        }
    }

    #[test]
    fn stable_inverse_adjointness() {
        let x = bump(-3.0, 0.01, 600, -0.5, 1.0, 0.3);
        let y = bump(-3.0, 0.01, 600, 0.7, 1.5, -1.1);
        for alpha in [Complex64::new(-0.8, 0.4), Complex64::new(1.3, 2.0)] {
            let lhs = stable_inverse(alpha, &x, Direction::Forward).unwrap().inner(&y).unwrap();
            let rhs = x.inner(&stable_inverse(alpha, &y, Direction::Adjoint).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1e-300));
        }
        assert!(stable_inverse(Complex64::new(0.0, 1.0), &x, Direction::Forward).is_err());
    }

    #[test]
    fn running_integral_of_indicator() {
        let x =
            SampledPath::from_fn(-1.0, 0.001, 3001, |t| c(if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 })).unwrap();
        let y = integrator(0.0, &x);
        for k in (0..y.len()).step_by(100) {
            let t = y.t(k);
            assert!((y.values[k].re - t.clamp(0.0, 1.0)).abs() < 1e-3, "{t}");
        }
    }

    #[test]
    fn modulation_relations_hold_exactly() {
        let x = bump(-2.0, 0.005, 800, 0.0, 1.0, 0.5);
        let w0 = 1.7;
        let direct = integrator(w0, &x);
        let via = modulate(w0, &integrator(0.0, &modulate(-w0, &x)));
        let direct_adj = integrator_adjoint(w0, &x);
        let via_adj = modulate(-w0, &integrator_adjoint(0.0, &modulate(w0, &x)));
        let t0 = 0.3;
        let corr = corrected_integrator(w0, t0, &x).unwrap();
        let corr_via = modulate(w0, &corrected_integrator(0.0, t0, &modulate(-w0, &x)).unwrap());
        let cadj = corrected_adjoint(w0, t0, &x).unwrap();
        let cadj_via = modulate(-w0, &corrected_adjoint(0.0, t0, &modulate(w0, &x)).unwrap());
        for (a, b) in [(direct, via), (direct_adj, via_adj), (corr, corr_via), (cadj, cadj_via)] {
            let err = a.values.iter().zip(&b.values).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "{err}");
        }
    }

    #[test]
    fn corrected_adjoint_of_dirac_is_indicator() {
        let d = SampledPath::dirac(-1.0, 0.01, 401, 1.5).unwrap();
        let z = corrected_adjoint(0.0, 0.0, &d).unwrap();
        for k in 0..z.len() {
            let t = z.t(k);
            let expected = if t > 0.005 && t < 1.495 {
                1.0
            } else if t.abs() < 0.005 || (t - 1.5).abs() < 0.005 {
                0.5
            } else {
                0.0
            };
            assert!((z.values[k].re - expected).abs() < 1e-12, "{t}: {}", z.values[k]);
        }
    }

    #[test]
    fn corrected_integrator_vanishes_at_boundary_point() {
        let x = bump(-2.0, 0.01, 500, 0.5, 1.0, 0.0);
        for t0 in [-1.234, 0.0, 0.777] {
            // exact for the demodulated interpolation used internally; plain
            // linear interpolation of a modulated signal is off by O((ω0Δ)²)
            let y = corrected_integrator(0.0, t0, &x).unwrap();
            assert!(y.interpolate(t0).unwrap().norm() < 1e-12);
            let y = corrected_integrator(2.5, t0, &x).unwrap();
            assert!(y.interpolate(t0).unwrap().norm() < 1e-3);
        }
        assert!(corrected_integrator(0.0, 10.0, &x).is_err());
    }

    #[test]
    fn correction_vanishes_for_zero_mean_input() {
        // x̂(0) = 0 for an odd input, so the plain adjoint is unchanged
        let x =
            SampledPath::from_fn(-2.0, 0.01, 401, |t| c(if t.abs() < 1.0 { t * (1.0 - t * t) } else { 0.0 })).unwrap();
        let a = corrected_adjoint(0.0, 0.5, &x).unwrap();
        let b = integrator_adjoint(0.0, &x);
        let err = a.values.iter().zip(&b.values).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }
}
