use std::f64::consts::PI;

use num_complex::Complex64;

use sparseproc::id_laws::{AmplitudeGrid, AmplitudeLaw, InversionOptions, LevyExponent};
use sparseproc::operators::{SampledPath, SystemSpec};
use sparseproc::statistics::{
    autocorrelation, char_form, covariance_form, first_order_pdf, power_spectrum, spectrum_from_autocorrelation,
    KernelExponent, TestFunction,
};
use sparseproc::wavelets::haar_basis;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn normal_pdf(x: f64, var: f64) -> f64 {
    (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn sup_error(inv: &sparseproc::id_laws::PdfInversion, oracle: impl Fn(f64) -> f64) -> f64 {
    inv.pdf.axis.iter().zip(&inv.pdf.values).map(|(x, v)| (v.re - oracle(*x)).abs()).fold(0.0, f64::max)
}

fn brownian() -> SystemSpec {
    SystemSpec::from_poles(&[c(0.0, 0.0)], &[], None).unwrap()
}

#[test]
fn ar1_marginal_is_gaussian_with_half_variance() {
    let system = SystemSpec::first_order(c(-1.0, 0.0)).unwrap();
    let out = AmplitudeGrid::covering(3.0, 0.02).unwrap();
    let inv =
        first_order_pdf(&system, &LevyExponent::gaussian(), 5.0, 1e-3, &out, &InversionOptions::default()).unwrap();
    let err = sup_error(&inv, |x| normal_pdf(x, 0.5));
    assert!(err < 2e-3, "sup error {err}");
}

#[test]
fn brownian_marginal_at_unit_time() {
    let out = AmplitudeGrid::covering(4.0, 0.02).unwrap();
    let inv =
        first_order_pdf(&brownian(), &LevyExponent::gaussian(), 1.0, 1e-3, &out, &InversionOptions::default()).unwrap();
    let err = sup_error(&inv, |x| normal_pdf(x, 1.0));
    assert!(err < 2e-3, "sup error {err}");
}

#[test]
fn cauchy_motion_spreads_linearly() {
    // a Cauchy Lévy motion at time t is Cauchy with scale t
    let out = AmplitudeGrid::covering(6.0, 0.02).unwrap();
    let f = LevyExponent::sas(1.0).unwrap();
    let inv = first_order_pdf(&brownian(), &f, 2.0, 1e-3, &out, &InversionOptions::default()).unwrap();
    let err = sup_error(&inv, |x| 2.0 / (PI * (4.0 + x * x)));
    assert!(err < 2e-3, "sup error {err}");
}

#[test]
fn ar1_autocorrelation_is_exponential() {
    for alpha in [-0.5, -1.0, -2.0] {
        let system = SystemSpec::first_order(c(alpha, 0.0)).unwrap();
        let r = autocorrelation(&system, &LevyExponent::gaussian(), 0.05, 40).unwrap();
        for (m, v) in r.values.iter().enumerate() {
            let tau = 0.05 * m as f64;
            let oracle = (alpha * tau).exp() / (2.0 * alpha.abs());
            assert!((v.re - oracle).abs() < 1e-4 * oracle.max(1e-2), "α={alpha} τ={tau}: {} vs {oracle}", v.re);
        }
    }
}

#[test]
fn second_order_spectrum() {
    // (D + 1)(D + 2): Φ(ω) = 1/((ω² + 1)(ω² + 4))
    let system = SystemSpec::from_poles(&[c(-1.0, 0.0), c(-2.0, 0.0)], &[], None).unwrap();
    let omegas: Vec<f64> = (0..=40).map(|k| 0.25 * k as f64).collect();
    let phi = power_spectrum(&system, &LevyExponent::gaussian(), &omegas).unwrap();
    for (w, v) in omegas.iter().zip(&phi.values) {
        let oracle = 1.0 / ((w * w + 1.0) * (w * w + 4.0));
        assert!((v.re - oracle).abs() < 1e-12);
    }
    // the Fourier transform of the autocorrelation reproduces it
    let r = autocorrelation(&system, &LevyExponent::gaussian(), 0.01, 3000).unwrap();
    let est = spectrum_from_autocorrelation(&r, &omegas);
    for ((w, v), e) in omegas.iter().zip(&phi.values).zip(&est) {
        assert!((v.re - e).abs() < 1e-4, "ω={w}: {} vs {e}", v.re);
    }
}

#[test]
fn brownian_covariance_is_minimum() {
    let delta = 1e-3;
    let n = 2001;
    let diracs = |t: f64| TestFunction::custom(SampledPath::dirac(0.0, delta, n, t).unwrap());
    for (t1, t2) in [(0.5, 1.5), (2.0, 1.0), (1.0, 1.0)] {
        let cov = covariance_form(&brownian(), &LevyExponent::gaussian(), &diracs(t1), &diracs(t2)).unwrap().re;
        assert!((cov - f64::min(t1, t2)).abs() < 5e-3, "({t1}, {t2}): {cov}");
    }
}

#[test]
fn gaussian_char_form_is_exp_of_half_covariance() {
    let system = SystemSpec::first_order(c(-0.7, 0.0)).unwrap();
    let g = LevyExponent::gaussian();
    let delta = 0.01;
    let phi =
        TestFunction::custom(SampledPath::from_fn(0.0, delta, 300, |t| c((t * 2.0).sin() * (-t).exp(), 0.0)).unwrap());
    let cov = covariance_form(&system, &g, &phi, &phi).unwrap().re;
    let ch = char_form(&system, &g, &phi).unwrap();
    assert!((ch - c((-0.5 * cov).exp(), 0.0)).norm() < 1e-12);
    // rect test function of a Brownian motion: Var ∫_0^1 W = 1/3
    let rect = TestFunction::rect(0.0, 1.0, 1e-3).unwrap();
    let v = covariance_form(&brownian(), &g, &rect, &rect).unwrap().re;
    assert!((v - 1.0 / 3.0).abs() < 2e-3, "{v}");
}

#[test]
fn wavelet_coefficients_of_brownian_motion_are_white() {
    // Haar wavelets are orthogonal derivatives of triangles, so the wavelet
    // coefficients of a Brownian motion are uncorrelated with equal variance
    // at a given level
    let delta = 1.0 / 64.0;
    let basis = haar_basis(0.0, delta, 1024, 4).unwrap();
    let g = LevyExponent::gaussian();
    let s = brownian();
    let w = |k| TestFunction::custom(basis.wavelet(3, k).unwrap());
    let v0 = covariance_form(&s, &g, &w(0), &w(0)).unwrap().re;
    let v1 = covariance_form(&s, &g, &w(1), &w(1)).unwrap().re;
    let x = covariance_form(&s, &g, &w(0), &w(1)).unwrap().re;
    assert!((v0 - v1).abs() < 1e-3 * v0);
    assert!(x.abs() < 1e-3 * v0, "cross {x} vs {v0}");
}

#[test]
fn poisson_window_has_zero_mass() {
    // ∫ f(ω·1_{[0,1)}) = f(ω), whose characteristic function tends to e^{−λ}
    let rate = 0.6;
    let f = LevyExponent::poisson(rate, AmplitudeLaw::standard_gaussian()).unwrap();
    let rect = TestFunction::rect(0.0, 1.0, 1e-2).unwrap();
    let g = KernelExponent::new(&f, &rect.path).unwrap();
    for w in [0.5, 2.0] {
        assert!((g.eval(w).unwrap() - f.eval(w).unwrap()).norm() < 1e-12);
    }
    let tail = g.eval(200.0).unwrap().exp();
    assert!((tail.re - (-rate).exp()).abs() < 1e-6, "{tail}");
}
