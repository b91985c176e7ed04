use num_complex::Complex64;

use super::path::{Direction, SampledPath};

fn binomial(m: usize, i: usize) -> f64 {
    (0..i).fold(1.0, |acc, k| acc * (m - k) as f64 / (k + 1) as f64)
}

/// Stencil of the m-th difference: `(offset, weight)` pairs such that
/// `D^m x(t_k) ≈ Σ weight·x_{k+offset}`. First order is a backward
/// difference, second order the centred one; in general the stencil starts
/// `⌈m/2⌉` samples to the left.
pub fn difference_stencil(m: usize, delta: f64) -> Vec<(isize, f64)> {
    let start = -(m.div_ceil(2) as isize);
    let scale = delta.powi(-(m as i32));
    (0..=m)
        .map(|i| {
            let sign = if (m - i).is_multiple_of(2) { 1.0 } else { -1.0 };
            (start + i as isize, sign * binomial(m, i) * scale)
        })
        .collect()
}

/// `Q(D)x = Σ_m b_m D^m x` with finite differences and zero extension; the
/// adjoint direction applies the transposed stencil.
pub fn apply_differential(b: &[Complex64], x: &SampledPath, direction: Direction) -> SampledPath {
    let n = x.len() as isize;
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    for (m, &bm) in b.iter().enumerate() {
        if bm == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (offset, w) in difference_stencil(m, x.delta) {
            let coef = bm * w;
            for k in 0..n {
                let j = match direction {
                    Direction::Forward => k + offset,
                    Direction::Adjoint => k - offset,
                };
                if (0..n).contains(&j) {
                    out[k as usize] += coef * x.values[j as usize];
                }
            }
        }
    }
    x.with_values(out)
}
