use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use sparseproc::id_laws::{
    levy_khintchine, pdf_from_exponent, psd_check, psd_check_exponent, sparsity_index, AmplitudeGrid, AmplitudeLaw,
    InversionOptions, LevyExponent, LevyTriplet,
};
use sparseproc::quadrature::QuadratureSpec;

fn laws() -> Vec<LevyExponent> {
    vec![
        LevyExponent::gaussian(),
        LevyExponent::laplace(),
        LevyExponent::sas(0.7).unwrap(),
        LevyExponent::sas(1.3).unwrap(),
        LevyExponent::poisson(0.4, AmplitudeLaw::Gaussian { mean: 0.5, std: 0.8 }).unwrap(),
        LevyExponent::poisson(1.5, AmplitudeLaw::Uniform { lo: -1.0, hi: 2.0 }).unwrap(),
        LevyExponent::poisson(2.0, AmplitudeLaw::Laplace { scale: 0.5 }).unwrap(),
    ]
}

#[test]
fn uniform_jumps_match_their_characteristic_function() {
    // λ(E e^{jωA} − 1) with A ~ U[lo, hi)
    let (lambda, lo, hi) = (1.5, -1.0, 2.0);
    let t = LevyTriplet::poisson(lambda, AmplitudeLaw::Uniform { lo, hi });
    for w in [-3.0, -0.4, 0.9, 5.0] {
        let mean_char = (Complex64::new(0.0, w * hi).exp() - Complex64::new(0.0, w * lo).exp())
            / Complex64::new(0.0, w * (hi - lo));
        let oracle = (mean_char - 1.0) * lambda;
        let got = levy_khintchine(&t, w, &QuadratureSpec::default()).unwrap();
        assert!((got - oracle).norm() < 1e-8, "ω={w}: {got} vs {oracle}");
    }
}

#[test]
fn laplace_amplitudes_give_rational_exponent() {
    // E e^{jωA} = 1/(1 + s²ω²) for a Laplace amplitude of scale s
    let f = LevyExponent::numeric(LevyTriplet::poisson(2.0, AmplitudeLaw::Laplace { scale: 0.5 })).unwrap();
    for w in [0.3, 1.0, 4.0] {
        let oracle = 2.0 * (1.0 / (1.0 + 0.25 * w * w) - 1.0);
        assert!((f.eval(w).unwrap().re - oracle).abs() < 1e-8);
    }
}

#[test]
fn closed_form_and_quadrature_agree_for_every_kind() {
    for f in laws() {
        let numeric = LevyExponent::numeric(f.triplet()).unwrap();
        for w in [-2.5, -0.3, 0.7, 3.0] {
            let a = f.eval(w).unwrap();
            let b = numeric.eval(w).unwrap();
            assert!((a - b).norm() < 1e-7 * (1.0 + a.norm()), "{} at {w}: {a} vs {b}", f.label());
        }
    }
}

#[test]
fn gaussian_and_cauchy_densities_invert() {
    let out = AmplitudeGrid::covering(4.0, 0.02).unwrap();
    let opts = InversionOptions::default();
    let g = LevyExponent::gaussian();
    let inv = pdf_from_exponent(|w| g.eval(w), &out, &opts).unwrap();
    for (x, v) in inv.pdf.axis.iter().zip(&inv.pdf.values) {
        assert!((v.re - (-x * x / 2.0).exp() / (2.0 * PI).sqrt()).abs() < 1e-8);
    }
    let cauchy = LevyExponent::sas(1.0).unwrap();
    let inv = pdf_from_exponent(|w| cauchy.eval(w), &out, &opts).unwrap();
    for (x, v) in inv.pdf.axis.iter().zip(&inv.pdf.values) {
        assert!((v.re - 1.0 / (PI * (1.0 + x * x))).abs() < 1e-4);
    }
}

#[test]
fn laplace_density_is_symmetric_exponential_after_unit_time() {
    // e^{f} = 1/(1+ω²) is the characteristic function of e^{−|x|}/2
    let out = AmplitudeGrid::covering(6.0, 0.05).unwrap();
    let f = LevyExponent::laplace();
    let inv = pdf_from_exponent(|w| f.eval(w), &out, &InversionOptions::default()).unwrap();
    for (x, v) in inv.pdf.axis.iter().zip(&inv.pdf.values) {
        if x.abs() > 0.2 {
            assert!((v.re - 0.5 * (-x.abs()).exp()).abs() < 2e-3, "x={x}: {}", v.re);
        }
    }
}

#[test]
fn variance_and_moments() {
    assert!((LevyExponent::gaussian().variance().unwrap() - 1.0).abs() < 1e-12);
    // λ·E[A²] = 0.4·(0.25 + 0.64)
    let p = LevyExponent::poisson(0.4, AmplitudeLaw::Gaussian { mean: 0.5, std: 0.8 }).unwrap();
    assert!((p.variance().unwrap() - 0.4 * 0.89).abs() < 1e-10);
    let s = LevyExponent::sas(1.5).unwrap();
    assert!(s.moment_finite(1.4).unwrap());
    assert!(!s.moment_finite(1.6).unwrap());
    assert!(!s.moment_finite(2.0).unwrap());
}

#[test]
fn sparsity_index_follows_rate() {
    // mass at zero of a unit-time compound Poisson increment is e^{−λ}
    for rate in [0.1, 1.0, 3.0] {
        assert!((sparsity_index(rate).unwrap() - (-rate).exp()).abs() < 1e-15);
    }
    assert!(sparsity_index(0.0).is_err());
}

#[test]
fn non_definite_exponent_is_caught() {
    let points: Vec<f64> = (0..12).map(|k| -3.0 + 0.5 * k as f64).collect();
    let bad = psd_check(|w| Ok(Complex64::new(-w.powi(4), 0.0)), 1.0, &points).unwrap();
    assert!(!bad.is_psd);
    for f in laws() {
        assert!(psd_check_exponent(&f, 1.0, &points).unwrap().is_psd, "{}", f.label());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponent_is_hermitian_and_dissipative(w in -20.0f64..20.0, which in 0usize..7) {
        let f = &laws()[which];
        let a = f.eval(w).unwrap();
        let b = f.eval(-w).unwrap();
        prop_assert!(a.re <= 1e-12);
        prop_assert!((a - b.conj()).norm() < 1e-10 * (1.0 + a.norm()));
    }

    #[test]
    fn characteristic_matrices_are_psd(
        points in proptest::collection::vec(-10.0f64..10.0, 2..10),
        tau in 0.05f64..3.0,
        which in 0usize..7,
    ) {
        let f = &laws()[which];
        prop_assert!(psd_check_exponent(f, tau, &points).unwrap().is_psd);
    }
}
