use num_complex::Complex64;
use proptest::prelude::*;

use sparseproc::operators::{
    apply_chain, corrected_integrator, factorize, green_path, integrator, poly_from_roots, polynomial_roots,
    stable_inverse, Direction, Factor, SampledPath, SystemSpec,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pairing(a: &SampledPath, b: &SampledPath) -> Complex64 {
    a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum::<Complex64>() * a.delta
}

fn signal(values: &[f64], delta: f64) -> SampledPath {
    SampledPath::from_real(-1.0, delta, values).unwrap()
}

#[test]
fn stable_inverse_of_dirac_is_green_function() {
    // a unit-mass cell at t = 0 passes through ρ_α; trapezoid weights give
    // half the mass at the impulse itself
    let delta = 1e-3;
    for alpha in [c(-1.5, 0.0), c(-0.5, 3.0), c(2.0, 0.0)] {
        let x = SampledPath::dirac(-4.0, delta, 8001, 0.0).unwrap();
        let y = stable_inverse(alpha, &x, Direction::Forward).unwrap();
        let g = green_path(alpha, -4.0, delta, 8001).unwrap();
        for k in (0..8001).step_by(97) {
            let t = y.t(k);
            if t.abs() < 2.0 * delta {
                continue;
            }
            assert!((y.values[k] - g.values[k]).norm() < 1e-9, "α={alpha} t={t}: {} vs {}", y.values[k], g.values[k]);
        }
    }
}

#[test]
fn integrator_of_constant_is_ramp() {
    let delta = 0.01;
    let x = SampledPath::from_real(0.0, delta, &vec![1.0; 301]).unwrap();
    let y = integrator(0.0, &x);
    for k in 0..301 {
        // trapezoid sum of a constant started at the first sample
        assert!((y.values[k].re - (k as f64 + 0.5) * delta).abs() < 1e-12);
    }
    let z = corrected_integrator(0.0, 1.0, &x).unwrap();
    for k in 0..301 {
        assert!((z.values[k].re - (y.t(k) - 1.0)).abs() < 1e-12);
    }
}

#[test]
fn factor_order() {
    let s =
        SystemSpec::from_poles(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.5, 0.0)], &[c(1.0, 0.0), c(1.0, 0.0)], None).unwrap();
    let chain = factorize(&s);
    assert!(matches!(chain.factors[0], Factor::Differential(_)));
    assert!(matches!(chain.factors.last(), Some(Factor::CorrectedIntegrator { .. })));
    assert_eq!(chain.factors.len(), 4);
}

#[test]
fn polynomial_round_trip() {
    let roots = vec![c(-1.0, 2.0), c(-1.0, -2.0), c(0.5, 0.0), c(-3.0, 0.0)];
    let coeffs = poly_from_roots(&roots);
    let mut back = polynomial_roots(&coeffs).unwrap();
    back.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut want = roots.clone();
    want.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for (a, b) in back.iter().zip(&want) {
        assert!((a - b).norm() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn frequency_response_matches_rational_form() {
    // L = (D + 1)(D − 2)/(D + 3): L̂(ω) = (jω + 1)(jω − 2)/(jω + 3)
    let s = SystemSpec::from_poles(&[c(-1.0, 0.0), c(2.0, 0.0)], &[c(3.0, 0.0), c(1.0, 0.0)], None).unwrap();
    for w in [-2.0, 0.0, 0.7, 5.0] {
        let jw = c(0.0, w);
        let want = (jw + 1.0) * (jw - 2.0) / (jw + 3.0);
        assert!((s.frequency_response(w) - want).norm() < 1e-12, "ω={w}");
    }
}

#[test]
fn imaginary_poles_are_not_stable_inverses() {
    let x = SampledPath::zeros(0.0, 0.1, 8).unwrap();
    assert!(stable_inverse(c(0.0, 1.0), &x, Direction::Forward).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chains_are_adjoint(
        x in proptest::collection::vec(-1.0f64..1.0, 64),
        y in proptest::collection::vec(-1.0f64..1.0, 64),
        which in 0usize..5,
    ) {
        let systems = [
            SystemSpec::first_order(c(-0.8, 0.0)).unwrap(),
            SystemSpec::first_order(c(1.2, 0.0)).unwrap(),
            SystemSpec::from_poles(&[c(-0.5, 2.0), c(-0.5, -2.0)], &[], None).unwrap(),
            SystemSpec::from_poles(&[c(0.0, 0.0)], &[], Some(vec![0.3])).unwrap(),
            SystemSpec::from_poles(&[c(0.0, 0.0), c(-1.0, 0.0)], &[c(2.0, 0.0), c(1.0, 0.0)], None).unwrap(),
        ];
        let chain = factorize(&systems[which]);
        let (x, y) = (signal(&x, 0.05), signal(&y, 0.05));
        let lhs = pairing(&apply_chain(&chain, &x).unwrap(), &y);
        let rhs = pairing(&x, &apply_chain(&chain.adjoint(), &y).unwrap());
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn inverses_are_linear(
        x in proptest::collection::vec(-1.0f64..1.0, 32),
        y in proptest::collection::vec(-1.0f64..1.0, 32),
        a in -3.0f64..3.0,
        re in -2.0f64..-0.1,
    ) {
        let (px, py) = (signal(&x, 0.1), signal(&y, 0.1));
        let mix = px.with_values(px.values.iter().zip(&py.values).map(|(u, v)| u * a + v).collect());
        let alpha = c(re, 0.0);
        let lhs = stable_inverse(alpha, &mix, Direction::Forward).unwrap();
        let fx = stable_inverse(alpha, &px, Direction::Forward).unwrap();
        let fy = stable_inverse(alpha, &py, Direction::Forward).unwrap();
        for k in 0..32 {
            prop_assert!((lhs.values[k] - (fx.values[k] * a + fy.values[k])).norm() < 1e-12);
        }
    }
}
