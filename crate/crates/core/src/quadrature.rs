//! Adaptive Gauss-Kronrod quadrature and an epsilon-accelerated driver for
//! oscillatory integrals over half-lines.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Tolerances and limits of the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-9, rel_tol: 1e-12, max_intervals: 4000 }
    }
}

/// Result of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    (value, error)
}

/// Adaptive G7/K15 integration of a complex integrand over `[a, b]`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    let (value, error) = kronrod15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut count = 1;
    while total_err > spec.abs_tol.max(spec.rel_tol * total.norm()) {
        if count >= spec.max_intervals {
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                requested: spec.abs_tol.max(spec.rel_tol * total.norm()),
            });
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval collapsed to machine resolution
            return Err(Error::QuadratureNonConvergence { achieved: total_err, requested: spec.abs_tol });
        }
        let (v1, e1) = kronrod15(&f, seg.a, mid);
        let (v2, e2) = kronrod15(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        count += 2;
        if count % 64 == 0 {
            // resum to avoid drift from repeated subtraction
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    Ok(Estimate { value: total, error: total_err })
}

/// Geometric remainder `s·r/(1−r)` of a sequence whose last terms decay with
/// a steady ratio `r`, together with an error bound for that remainder.
fn geometric_remainder(h: &[f64], negligible: f64) -> Option<(f64, f64)> {
    let n = h.len();
    let last = *h.last()?;
    if last.abs() < negligible {
        return Some((0.0, last.abs()));
    }
    if n < 4 {
        return None;
    }
    let ratios: Vec<f64> = (n - 3..n).map(|i| h[i] / h[i - 1]).collect();
    let r = ratios[2];
    if !(r > 0.0 && r < 0.995) {
        return None;
    }
    let spread = ratios.iter().map(|q| (q - r).abs()).fold(0.0, f64::max);
    if spread > 0.05 * (1.0 - r) {
        return None;
    }
    let rem = last * r / (1.0 - r);
    Some((rem, rem.abs() * spread / (1.0 - r) + last.abs() * 1e-3))
}

/// Integrates over `[start, ∞)` in consecutive chunks of width `width`.
///
/// Meant for integrands mapped to a logarithmic variable, where admissible
/// integrands decay exponentially, possibly slowly. Once the chunk
/// contributions settle into a geometric sequence, the remainder is summed
/// in closed form. Returns `Ok(Err(size))` when contributions stop shrinking,
/// i.e. when the integral looks divergent. Evaluation stops early if the
/// integrand overflows, in which case the geometric remainder is used.
pub fn integrate_decaying_tail<F: Fn(f64) -> Complex64>(
    f: F,
    start: f64,
    width: f64,
    spec: &QuadratureSpec,
) -> Result<std::result::Result<Estimate, f64>> {
    const MAX_CHUNKS: usize = 400;
    const MIN_CHUNKS: usize = 4;
    let chunk_spec = QuadratureSpec { abs_tol: spec.abs_tol * 0.01, ..*spec };
    let negligible = spec.abs_tol * 1e-3;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let (mut re, mut im) = (Vec::new(), Vec::new());
    let mut size = f64::INFINITY;
    let mut lo = start;
    for k in 0..MAX_CHUNKS {
        let est = integrate(&f, lo, lo + width, &chunk_spec)?;
        if !(est.value.re.is_finite() && est.value.im.is_finite()) {
            break;
        }
        total += est.value;
        err += est.error;
        size = est.value.norm();
        re.push(est.value.re);
        im.push(est.value.im);
        lo += width;
        if k + 1 < MIN_CHUNKS {
            continue;
        }
        if size < negligible {
            return Ok(Ok(Estimate { value: total, error: err + size }));
        }
        if let (Some((rr, er)), Some((ri, ei))) =
            (geometric_remainder(&re, negligible), geometric_remainder(&im, negligible))
        {
            if er + ei < spec.abs_tol * 0.1 {
                return Ok(Ok(Estimate { value: total + Complex64::new(rr, ri), error: err + er + ei }));
            }
        }
        let n = re.len();
        let stalled = (n - 3..n).all(|i| {
            let prev = Complex64::new(re[i - 1], im[i - 1]).norm();
            Complex64::new(re[i], im[i]).norm() >= 0.999 * prev
        });
        if stalled {
            return Ok(Err(size));
        }
    }
    match (geometric_remainder(&re, negligible), geometric_remainder(&im, negligible)) {
        (Some((rr, er)), Some((ri, ei))) if er + ei < spec.abs_tol => {
            Ok(Ok(Estimate { value: total + Complex64::new(rr, ri), error: err + er + ei }))
        }
        _ => Ok(Err(size)),
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
/// accelerated limit and an error estimate.
pub fn wynn_epsilon(partial: &[Complex64]) -> (Complex64, f64) {
    let n = partial.len();
    if n < 3 {
        let last = partial.last().copied().unwrap_or_default();
        return (last, f64::INFINITY);
    }
    // table[k] holds column k of the epsilon table
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut curr: Vec<Complex64> = partial.to_vec();
    let mut best = *partial.last().unwrap();
    let mut best_err = (partial[n - 1] - partial[n - 2]).norm();
    let mut column = 0;
    while curr.len() > 1 {
        let mut next = Vec::with_capacity(curr.len() - 1);
        for i in 0..curr.len() - 1 {
            let diff = curr[i + 1] - curr[i];
            let base = if column == 0 { Complex64::new(0.0, 0.0) } else { prev[i + 1] };
            if diff.norm() == 0.0 {
                next.push(Complex64::new(f64::INFINITY, 0.0));
            } else {
                next.push(base + diff.inv());
            }
        }
        column += 1;
        // even columns hold estimates of the limit
        if column % 2 == 0 && next.len() >= 2 {
            let m = next.len();
            let (a, b) = (next[m - 1], next[m - 2]);
            if a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite() {
                let e = (a - b).norm();
                if e < best_err {
                    best = a;
                    best_err = e;
                }
            }
        }
        prev = curr;
        curr = next;
    }
    (best, best_err)
}

/// Integrates `g(a)·e^{j·sign·ω·a}` over `[start, ∞)` by summing over
/// half-periods and extrapolating the partial sums.
pub fn integrate_oscillatory_tail<F: Fn(f64) -> f64>(
    g: F,
    omega: f64,
    start: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let w = omega;
    let period = std::f64::consts::PI / w.abs();
    let integrand = |a: f64| {
        let (s, c) = (w * a).sin_cos();
        Complex64::new(c, s) * g(a)
    };
    let piece_spec = QuadratureSpec { abs_tol: spec.abs_tol * 1e-3, ..*spec };
    let mut sums: Vec<Complex64> = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut lo = start;
    let mut last_estimate = Complex64::new(f64::NAN, 0.0);
    let mut piece_err = 0.0;
    let mut tiny_run = 0;
    for _ in 0..2000 {
        let est = integrate(integrand, lo, lo + period, &piece_spec)?;
        piece_err += est.error;
        acc += est.value;
        sums.push(acc);
        lo += period;
        if est.value.norm() < spec.abs_tol * 1e-4 {
            tiny_run += 1;
            if tiny_run >= 3 {
                return Ok(Estimate { value: acc, error: piece_err + est.value.norm() });
            }
        } else {
            tiny_run = 0;
        }
        if sums.len() >= 8 && sums.len().is_multiple_of(4) {
            let window = &sums[sums.len().saturating_sub(40)..];
            let (limit, err) = wynn_epsilon(window);
            let change = (limit - last_estimate).norm();
            if err < spec.abs_tol * 0.1 && change < spec.abs_tol * 0.1 {
                return Ok(Estimate { value: limit, error: err.max(change) + piece_err });
            }
            last_estimate = limit;
        }
    }
    Err(Error::QuadratureNonConvergence { achieved: (acc - last_estimate).norm(), requested: spec.abs_tol })
}
