use proptest::prelude::*;

use sparseproc::wavelets::{
    dct_basis, espline_basis, haar_basis, klt_basis, m_term_curve, m_term_error, toeplitz_from_fn, BSpline,
    BSplineDegree, OrthoTransform,
};

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[test]
fn espline_tends_to_haar_linearly() {
    // the exponential weights differ from 1 by O(αΔm), so the distance between
    // the two bases shrinks in proportion to α
    let haar = haar_basis(0.0, 0.125, 64, 3).unwrap();
    let dist = |alpha: f64| {
        let e = espline_basis(alpha, 0.0, 0.125, 64, 3).unwrap();
        (1..=3)
            .flat_map(|j| (0..haar.shifts(j)).map(move |k| (j, k)))
            .map(|(j, k)| {
                let a = e.wavelet(j, k).unwrap().real();
                let b = haar.wavelet(j, k).unwrap().real();
                a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };
    let (d1, d2, d3) = (dist(-0.2), dist(-0.1), dist(-0.05));
    assert!(d1 > 0.0);
    assert!((d1 / d2 - 2.0).abs() < 0.1 && (d2 / d3 - 2.0).abs() < 0.1, "{d1} {d2} {d3}");
    let exact = espline_basis(0.0, 0.0, 0.125, 64, 3).unwrap();
    let (a, h) = (exact.wavelet(2, 3).unwrap().real(), haar.wavelet(2, 3).unwrap().real());
    assert!(a.iter().zip(&h).all(|(x, y)| (x - y).abs() < 1e-14));
}

#[test]
fn espline_wavelets_annihilate_their_exponential() {
    let alpha = -0.3;
    let b = espline_basis(alpha, 0.0, 0.25, 128, 4).unwrap();
    // every wavelet is L*φ with L = D − α, and L kills e^{αt}
    let x: Vec<f64> = (0..128).map(|k| (alpha * 0.25 * k as f64).exp()).collect();
    for (level, row) in b.analyze(&x).unwrap().details.iter().enumerate() {
        for c in row {
            assert!(c.abs() < 1e-12, "level {}: {c}", level + 1);
        }
    }
}

#[test]
fn klt_of_ar1_correlation_diagonalizes() {
    let n = 32;
    let rho: f64 = 0.8;
    let r: Vec<f64> = (0..n).map(|k| rho.powi(k as i32)).collect();
    let klt = klt_basis(&r).unwrap();
    assert!(klt.orthonormality_error() < 1e-10);
    let cov = toeplitz_from_fn(n, |k| r[k]);
    let rows = &klt.rows;
    let d = rows * &cov * rows.transpose();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                assert!(d[(i, j)].abs() < 1e-9);
            }
        }
    }
    // the trace is preserved and eigenvalues descend
    let eig = klt.eigenvalues.as_ref().unwrap();
    assert!((eig.iter().sum::<f64>() - n as f64).abs() < 1e-9);
    assert!(eig.windows(2).all(|w| w[0] >= w[1] - 1e-12));
}

#[test]
fn dct_matches_explicit_cosines() {
    let n = 16;
    let b = dct_basis(n).unwrap();
    for k in [0usize, 3, 15] {
        let scale = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
        for m in 0..n {
            let want = scale * (std::f64::consts::PI * (m as f64 + 0.5) * k as f64 / n as f64).cos();
            assert!((b.rows[(k, m)] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn sparse_signal_is_compressed_by_haar() {
    // a piecewise constant signal with two jumps has few nonzero Haar
    // coefficients, while the DCT spreads it
    let n = 256;
    let x: Vec<f64> = (0..n).map(|k| if (70..150).contains(&k) { 1.0 } else { 0.0 }).collect();
    let haar = haar_basis(0.0, 1.0, n, 8).unwrap();
    let dct = dct_basis(n).unwrap();
    let m = 20;
    let eh = m_term_error(&x, &haar, m).unwrap();
    let ed = m_term_error(&x, &dct, m).unwrap();
    assert!(eh < 1e-20, "haar {eh}");
    assert!(ed > 1e-3, "dct {ed}");
}

#[test]
fn bspline_integrals() {
    // unit mass for both degrees; the triangle is supported on [0, 2]
    for degree in [BSplineDegree::Rect, BSplineDegree::Triangle] {
        let b = BSpline::sample(degree, 1e-3).unwrap();
        let mass: f64 = b.path.values.iter().map(|v| v.re).sum::<f64>() * 1e-3;
        assert!((mass - 1.0).abs() < 2e-3, "{degree:?}: {mass}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn espline_round_trip_and_parseval(
        x in proptest::collection::vec(-5.0f64..5.0, 64),
        alpha in -1.0f64..0.0,
        levels in 1usize..=6,
    ) {
        let b = espline_basis(alpha, 0.0, 0.5, 64, levels).unwrap();
        let c = b.forward(&x).unwrap();
        prop_assert!((energy(&c) - energy(&x)).abs() < 1e-9 * (1.0 + energy(&x)));
        let back = b.inverse(&c).unwrap();
        for (u, v) in back.iter().zip(&x) {
            prop_assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn m_term_error_is_monotone(x in proptest::collection::vec(-5.0f64..5.0, 32)) {
        let dct = dct_basis(32).unwrap();
        let ms: Vec<usize> = (0..=32).collect();
        let curve = m_term_curve(&x, &dct, &ms).unwrap();
        prop_assert!(curve.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        // errors are relative to the signal energy
        prop_assert!(curve[32] < 1e-20);
        prop_assert!((curve[0] - 1.0).abs() < 1e-12);
    }
}
