//! Discretized Lévy white noise: independent cell increments and exact
//! compound-Poisson impulse streams.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Normal, Poisson, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::id_laws::{AmplitudeLaw, CharGrid, ExponentKind, GridDomain, LevyExponent};
use crate::rng::stream_rng;

/// A white noise observed through cells of width `delta`, with the random
/// stream it draws from.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub exponent: LevyExponent,
    pub seed: u64,
    pub stream: u64,
    pub delta: f64,
}

impl NoiseSpec {
    pub fn new(exponent: LevyExponent, seed: u64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(invalid(format!("cell width must be positive, got {delta}")));
        }
        Ok(Self { exponent, seed, stream: 0, delta })
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }
}

pub(crate) fn sample_amplitude<R: Rng + ?Sized>(law: &AmplitudeLaw, rng: &mut R) -> f64 {
    match *law {
        AmplitudeLaw::Gaussian { mean, std } => {
            let z: f64 = rng.sample(StandardNormal);
            mean + std * z
        }
        AmplitudeLaw::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
        AmplitudeLaw::Laplace { scale } => {
            let a: f64 = rng.sample(Exp1);
            let b: f64 = rng.sample(Exp1);
            scale * (a - b)
        }
    }
}

/// Standard symmetric α-stable draw with characteristic function
/// `e^{−|ω|^α}` (Chambers–Mallows–Stuck).
pub fn standard_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let v = half_pi * (2.0 * rng.random::<f64>() - 1.0);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = rng.sample(Exp1);
    let a = (alpha * v).sin() / v.cos().powf(1.0 / alpha);
    a * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Sampler of `⟨w, 1_{[kΔ,(k+1)Δ)}⟩` for a fixed law and cell width.
#[derive(Debug, Clone)]
pub enum IncrementSampler {
    Gaussian(Normal<f64>),
    Laplace(Gamma<f64>),
    Poisson { count: Option<Poisson<f64>>, amplitude: AmplitudeLaw },
    Sas { alpha: f64, scale: f64 },
    Zero,
}

impl IncrementSampler {
    pub fn new(exponent: &LevyExponent, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(invalid(format!("cell width must be positive, got {delta}")));
        }
        Ok(match &exponent.kind {
            ExponentKind::Gaussian { variance } => {
                if *variance == 0.0 {
                    IncrementSampler::Zero
                } else {
                    IncrementSampler::Gaussian(
                        Normal::new(0.0, (variance * delta).sqrt()).map_err(|e| invalid(e.to_string()))?,
                    )
                }
            }
            ExponentKind::Laplace => {
                IncrementSampler::Laplace(Gamma::new(delta, 1.0).map_err(|e| invalid(e.to_string()))?)
            }
            ExponentKind::Poisson { rate, amplitude } => {
                let mean = rate * delta;
                let count =
                    if mean > 0.0 { Some(Poisson::new(mean).map_err(|e| invalid(e.to_string()))?) } else { None };
                IncrementSampler::Poisson { count, amplitude: *amplitude }
            }
            ExponentKind::Sas { alpha } => {
                IncrementSampler::Sas { alpha: *alpha, scale: (delta / libm::tgamma(alpha + 1.0)).powf(1.0 / alpha) }
            }
            ExponentKind::Numeric(_) => {
                return Err(Error::UnsupportedLaw(format!(
                    "no exact sampler for {}; invert its characteristic function with char_to_pdf and \
                     sample by inverse CDF instead",
                    exponent.label()
                )))
            }
        })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            IncrementSampler::Gaussian(n) => n.sample(rng),
            IncrementSampler::Laplace(g) => g.sample(rng) - g.sample(rng),
            IncrementSampler::Poisson { count, amplitude } => {
                let Some(count) = count else { return 0.0 };
                let k = count.sample(rng) as u64;
                (0..k).map(|_| sample_amplitude(amplitude, rng)).sum()
            }
            IncrementSampler::Sas { alpha, scale } => scale * standard_stable(*alpha, rng),
            IncrementSampler::Zero => 0.0,
        }
    }

    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// `n` independent cell increments of the noise.
pub fn sample_increments(spec: &NoiseSpec, n: usize) -> Result<Vec<f64>> {
    let sampler = IncrementSampler::new(&spec.exponent, spec.delta)?;
    let mut rng = stream_rng(spec.seed, spec.stream);
    Ok(sampler.fill(&mut rng, n))
}

/// Exact compound-Poisson noise on `[0, duration)`: impulse locations and
/// amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseStream {
    /// Sorted impulse locations.
    pub locations: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub rate: f64,
    pub duration: f64,
}

impl ImpulseStream {
    /// Sums the impulses falling in each cell `[kΔ, (k+1)Δ)`, `k < n`.
    pub fn bin(&self, delta: f64, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (&t, &a) in self.locations.iter().zip(&self.amplitudes) {
            let k = (t / delta).floor();
            if k >= 0.0 && (k as usize) < n {
                out[k as usize] += a;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }
}

/// Draws an impulse stream with `Poisson(rate·duration)` impulses placed
/// uniformly on `[0, duration)`.
pub fn sample_impulse_stream(
    rate: f64,
    duration: f64,
    amplitude: &AmplitudeLaw,
    seed: u64,
    stream: u64,
) -> Result<ImpulseStream> {
    if !(rate >= 0.0 && rate.is_finite()) || !(duration > 0.0 && duration.is_finite()) {
        return Err(invalid(format!("need rate ≥ 0 and duration > 0, got ({rate}, {duration})")));
    }
    amplitude.validate()?;
    let mut rng = stream_rng(seed, stream);
    let mean = rate * duration;
    let count =
        if mean > 0.0 { Poisson::new(mean).map_err(|e| invalid(e.to_string()))?.sample(&mut rng) as usize } else { 0 };
    let mut locations: Vec<f64> = (0..count).map(|_| duration * rng.random::<f64>()).collect();
    locations.sort_by(f64::total_cmp);
    let amplitudes = (0..count).map(|_| sample_amplitude(amplitude, &mut rng)).collect();
    Ok(ImpulseStream { locations, amplitudes, rate, duration })
}

/// Monte-Carlo estimate of a characteristic function.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalChar {
    pub grid: CharGrid,
    /// `1/√n`, a bound on the standard error of every sample.
    pub standard_error: f64,
}

/// `(1/n)Σ e^{jωx_i}` on `omegas`.
pub fn empirical_char(samples: &[f64], omegas: &[f64]) -> Result<EmpiricalChar> {
    if samples.is_empty() {
        return Err(invalid("empirical characteristic function needs at least one sample"));
    }
    let n = samples.len() as f64;
    let values = omegas
        .iter()
        .map(|&w| {
            let (mut re, mut im) = (0.0, 0.0);
            for &x in samples {
                let (s, c) = (w * x).sin_cos();
                re += c;
                im += s;
            }
            Complex64::new(re / n, im / n)
        })
        .collect();
    Ok(EmpiricalChar {
        grid: CharGrid { axis: omegas.to_vec(), values, domain: GridDomain::Frequency },
        standard_error: 1.0 / n.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{binomial_sigma, sample_mean_var};

    #[test]
    fn gaussian_unit_variance() {
        let spec = NoiseSpec::new(LevyExponent::gaussian(), 11, 1.0).unwrap();
        let x = sample_increments(&spec, 100_000).unwrap();
        let (_, var) = sample_mean_var(&x);
        assert!((var - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn poisson_zero_mass() {
        let f = LevyExponent::poisson(1.0 / 32.0, AmplitudeLaw::standard_gaussian()).unwrap();
        let spec = NoiseSpec::new(f, 5, 1.0).unwrap();
        let n = 100_000;
        let x = sample_increments(&spec, n).unwrap();
        let zeros = x.iter().filter(|&&v| v == 0.0).count() as f64 / n as f64;
        let p = (-1.0f64 / 32.0).exp();
        assert!((zeros - p).abs() < 3.0 * binomial_sigma(p, n), "{zeros}");
    }

    #[test]
    fn laplace_and_stable_chars() {
        let n = 100_000;
        let lap = sample_increments(&NoiseSpec::new(LevyExponent::laplace(), 3, 1.0).unwrap(), n).unwrap();
        let c = empirical_char(&lap, &[1.0]).unwrap();
        assert!((c.grid.values[0] - Complex64::new(0.5, 0.0)).norm() < 5.0 * c.standard_error);
        let sas = sample_increments(&NoiseSpec::new(LevyExponent::sas(1.2).unwrap(), 3, 1.0).unwrap(), n).unwrap();
        let c = empirical_char(&sas, &[1.0]).unwrap();
        let expected = (-1.0 / libm::tgamma(2.2)).exp();
        assert!((c.grid.values[0] - Complex64::new(expected, 0.0)).norm() < 5.0 * c.standard_error);
    }

    #[test]
    fn numeric_exponent_has_no_sampler() {
        let f = LevyExponent::numeric(crate::id_laws::LevyTriplet::laplace()).unwrap();
        let spec = NoiseSpec::new(f, 0, 1.0).unwrap();
        assert!(matches!(sample_increments(&spec, 3), Err(Error::UnsupportedLaw(_))));
    }

    #[test]
    fn reproducible_streams() {
        let spec = NoiseSpec::new(LevyExponent::sas(0.7).unwrap(), 99, 0.25).unwrap();
        let a = sample_increments(&spec, 64).unwrap();
        let b = sample_increments(&spec, 64).unwrap();
        assert_eq!(a, b);
        let c = sample_increments(&spec.clone().with_stream(1), 64).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn impulse_streams() {
        let amp = AmplitudeLaw::standard_gaussian();
        assert!(sample_impulse_stream(0.0, 10.0, &amp, 1, 0).unwrap().is_empty());
        let s = sample_impulse_stream(1.0 / 32.0, 1024.0, &amp, 1, 0).unwrap();
        assert!(s.locations.windows(2).all(|w| w[0] <= w[1]));
        assert!(s.locations.iter().all(|&t| (0.0..1024.0).contains(&t)));
        let binned = s.bin(1.0, 1024);
        assert!((binned.iter().sum::<f64>() - s.amplitudes.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn constant_samples_give_pure_phase() {
        let c = empirical_char(&[0.7; 5], &[0.0, 1.0, -2.0]).unwrap();
        for (w, v) in c.grid.axis.iter().zip(&c.grid.values) {
            assert!((v - Complex64::from_polar(1.0, 0.7 * w)).norm() < 1e-15);
        }
        assert!(empirical_char(&[1.0], &[]).unwrap().grid.is_empty());
    }
}
