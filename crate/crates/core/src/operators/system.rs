use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Poles within this relative distance are treated as one repeated pole.
const CLUSTER_TOLERANCE: f64 = 1e-5;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    // coeffs in ascending order; returns (p(z), p'(z))
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of the monic polynomial `ζ^N + c_{N−1}ζ^{N−1} + … + c_0` given as
/// `c_0..c_{N−1}` (Aberth–Ehrlich iteration followed by Newton polishing;
/// tight clusters are merged into their centroid).
pub fn polynomial_roots(lower: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = lower.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-lower[0]]);
    }
    let mut coeffs = lower.to_vec();
    coeffs.push(Complex64::new(1.0, 0.0));
    let bound = 1.0 + lower.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = (lower[0].norm().powf(1.0 / n as f64)).clamp(1e-3, bound);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4)).collect();
    let mut converged = false;
    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(&coeffs, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&i| i != k).map(|i| (z[k] - z[i]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        // repeated roots converge slowly; accept if residuals are small
        let worst = z.iter().map(|&r| horner(&coeffs, r).0.norm()).fold(0.0, f64::max);
        if !(worst < 1e-8 * bound.powi(n as i32)) {
            return Err(Error::RootFinding(format!("Aberth iteration did not converge (residual {worst:.3e})")));
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&coeffs, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *r - p / dp;
            if horner(&coeffs, next).0.norm() < p.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    // merge clusters of a repeated root into their centroid
    let mut merged = z.clone();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let members: Vec<usize> = (i..n)
            .filter(|&j| !assigned[j] && (z[j] - z[i]).norm() <= CLUSTER_TOLERANCE * z[i].norm().max(1.0))
            .collect();
        let centroid = members.iter().map(|&j| z[j]).sum::<Complex64>() / members.len() as f64;
        for &j in &members {
            assigned[j] = true;
            merged[j] = centroid;
        }
    }
    Ok(merged)
}

/// Coefficients `c_0..c_{N−1}` of `Π(ζ − p_i)`.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * r;
        }
        c = next;
    }
    c.pop();
    c
}

/// A rational whitening operator `L = P_N(D)/Q_M(D)` with its factorization
/// data.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    /// `a_0..a_{N−1}` of the monic `P_N`.
    pub a: Vec<Complex64>,
    /// `b_0..b_M` of `Q_M`.
    pub b: Vec<Complex64>,
    /// Roots of `P_N`; off-axis poles first, purely imaginary ones last.
    pub poles: Vec<Complex64>,
    /// Number of purely imaginary poles.
    pub n0: usize,
    /// Boundary points `t_1..t_{n0}`, one per imaginary pole.
    pub boundary_points: Vec<f64>,
}

/// Relative threshold under which a pole is classified as purely imaginary.
pub fn imag_tolerance(alpha: Complex64) -> f64 {
    1e-9 * alpha.norm().max(1.0)
}

impl SystemSpec {
    /// Builds the system from its poles; `b` defaults to `[1]` when empty and
    /// boundary points default to 0.
    pub fn from_poles(poles: &[Complex64], b: &[Complex64], boundary_points: Option<Vec<f64>>) -> Result<Self> {
        let mut off_axis = Vec::new();
        let mut imaginary = Vec::new();
        for &p in poles {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(invalid(format!("pole {p} is not finite")));
            }
            if p.re.abs() <= imag_tolerance(p) {
                imaginary.push(Complex64::new(0.0, p.im));
            } else {
                off_axis.push(p);
            }
        }
        let n0 = imaginary.len();
        let boundary_points = match boundary_points {
            Some(t) if t.len() != n0 => {
                return Err(invalid(format!("{} boundary points given for {n0} imaginary poles", t.len())))
            }
            Some(t) => t,
            None => vec![0.0; n0],
        };
        if boundary_points.iter().any(|t| !t.is_finite()) {
            return Err(invalid("boundary points must be finite"));
        }
        let b = if b.is_empty() { vec![Complex64::new(1.0, 0.0)] } else { b.to_vec() };
        if b.iter().all(|c| c.norm() == 0.0) {
            return Err(invalid("Q_M must not vanish identically"));
        }
        let mut ordered = off_axis;
        ordered.extend(imaginary);
        Ok(Self { a: poly_from_roots(&ordered), b, poles: ordered, n0, boundary_points })
    }

    /// Builds the system from `a_0..a_{N−1}` (monic `P_N`) and `b_0..b_M`.
    pub fn from_coefficients(a: &[Complex64], b: &[Complex64], boundary_points: Option<Vec<f64>>) -> Result<Self> {
        let poles = polynomial_roots(a)?;
        let mut spec = Self::from_poles(&poles, b, boundary_points)?;
        spec.a = a.to_vec();
        Ok(spec)
    }

    /// First-order system `D − α·Id`.
    pub fn first_order(alpha: Complex64) -> Result<Self> {
        Self::from_poles(&[alpha], &[], None)
    }

    pub fn order(&self) -> usize {
        self.poles.len()
    }

    pub fn is_stationary(&self) -> bool {
        self.n0 == 0
    }

    /// Largest coefficient mismatch between `a` and the polynomial rebuilt
    /// from the poles.
    pub fn reconstruction_error(&self) -> f64 {
        poly_from_roots(&self.poles).iter().zip(&self.a).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
    }

    fn eval_p(&self, z: Complex64) -> Complex64 {
        let mut coeffs = self.a.clone();
        coeffs.push(Complex64::new(1.0, 0.0));
        horner(&coeffs, z).0
    }

    fn eval_q(&self, z: Complex64) -> Complex64 {
        horner(&self.b, z).0
    }

    /// Frequency response `L̂(ω) = P_N(jω)/Q_M(jω)`.
    pub fn frequency_response(&self, omega: f64) -> Complex64 {
        let z = Complex64::new(0.0, omega);
        self.eval_p(z) / self.eval_q(z)
    }
}
