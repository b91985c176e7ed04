use nalgebra::DMatrix;
use num_complex::Complex64;

use super::exponent::{ExponentKind, LevyExponent};
use crate::error::{invalid, Error, Result};

/// `per_decade` log-spaced points per decade between `lo` and `hi` (inclusive).
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    let n = ((b - a) * per_decade as f64).ceil().max(1.0) as usize;
    (0..=n).map(|i| 10f64.powf(a + (b - a) * i as f64 / n as f64)).collect()
}

/// `sup_u (|f(u)| + |u|·|f'(u)|)/|u|^p` over the probe grid.
pub fn p_admissibility_margin(f: &LevyExponent, p: f64, probe: &[f64]) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid(format!("admissibility order must be ≥ 1, got {p}")));
    }
    let mut sup: f64 = 0.0;
    for &u in probe {
        if u == 0.0 || !u.is_finite() {
            return Err(invalid("probe points must be finite and nonzero"));
        }
        let d = f.eval_deriv(u)?;
        if !(d.re.is_finite() && d.im.is_finite()) {
            return Err(invalid(format!("derivative of {} is not finite at {u}", f.label())));
        }
        let value = (f.eval(u)?.norm() + u.abs() * d.norm()) / u.abs().powf(p);
        sup = sup.max(value);
    }
    Ok(sup)
}

/// Verdict of the admissibility probe for one order `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityProbe {
    pub p: f64,
    /// Margin on `|u| ∈ [1e-4, 1e4]`.
    pub narrow: f64,
    /// Margin on `|u| ∈ [1e-8, 1e8]`.
    pub wide: f64,
    pub bounded: bool,
}

/// Probes boundedness of the margin by widening the grid by four decades on
/// both sides: a bounded margin barely moves, a divergent one grows by a
/// power of the extension.
pub fn probe_p_admissibility(f: &LevyExponent, p: f64) -> Result<AdmissibilityProbe> {
    let narrow_grid: Vec<f64> = log_grid(1e-4, 1e4, 8);
    let wide_grid: Vec<f64> = log_grid(1e-8, 1e8, 8);
    let narrow = p_admissibility_margin(f, p, &narrow_grid)?;
    let wide = p_admissibility_margin(f, p, &wide_grid)?;
    Ok(AdmissibilityProbe { p, narrow, wide, bounded: wide <= 1.05 * narrow + 1e-12 })
}

/// Smallest order in `[1, 2]` for which the exponent passes the probe.
///
/// Candidates are `1, 1.05, …, 2` plus the stability index of an SαS law.
pub fn admissible_order(f: &LevyExponent) -> Result<Option<f64>> {
    let mut candidates: Vec<f64> = (0..=20).map(|i| 1.0 + 0.05 * i as f64).collect();
    if let ExponentKind::Sas { alpha } = f.kind {
        if (1.0..=2.0).contains(&alpha) {
            candidates.push(alpha);
        }
    }
    candidates.sort_by(f64::total_cmp);
    for p in candidates {
        if probe_p_admissibility(f, p)?.bounded {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Errors unless the exponent is p-admissible for some `p ∈ [1, 2]`.
pub fn require_admissible(f: &LevyExponent) -> Result<f64> {
    admissible_order(f)?.ok_or_else(|| {
        Error::AdmissibilityViolation(format!(
            "{} is not p-admissible for any p in [1, 2]: the margin (|f(u)| + |u f'(u)|)/|u|^p grows without bound \
             as the probe grid is extended (SαS laws with α < 1 are excluded)",
            f.label()
        ))
    })
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

/// Default eigenvalue tolerance of [`psd_check`].
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Tests whether `[e^{τ f(ω_m − ω_n)}]` is positive semidefinite.
pub fn psd_check<F>(f: F, tau: f64, points: &[f64]) -> Result<PsdReport>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let n = points.len();
    if n == 0 {
        return Ok(PsdReport { is_psd: true, min_eigenvalue: f64::INFINITY });
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (f(points[i] - points[j])? * tau).exp();
        }
    }
    // the exact matrix is Hermitian; remove rounding asymmetry
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigenvalues();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PsdReport { is_psd: min >= -PSD_TOLERANCE, min_eigenvalue: min })
}

/// [`psd_check`] for a Lévy exponent.
pub fn psd_check_exponent(f: &LevyExponent, tau: f64, points: &[f64]) -> Result<PsdReport> {
    psd_check(|w| f.eval(w), tau, points)
}
