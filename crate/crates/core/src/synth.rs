//! Sample paths of processes `s = L^{-1}w` driven by discretized Lévy noise.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::id_laws::{require_admissible, AmplitudeLaw, ExponentKind, LevyExponent};
use crate::noise::{sample_impulse_stream, IncrementSampler, NoiseSpec};
use crate::operators::{factorize, Direction, Factor, OperatorChain, SampledPath, SystemSpec};
use crate::rng::stream_rng;

/// Output grid `t_k = t_start + k·delta`, `k < n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_start: f64,
    pub delta: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(t_start: f64, delta: f64, n: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) || !t_start.is_finite() {
            return Err(invalid(format!("grid needs finite origin and positive spacing, got ({t_start}, {delta})")));
        }
        if n == 0 {
            return Err(invalid("grid needs at least one sample"));
        }
        Ok(Self { t_start, delta, n })
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + (self.n - 1) as f64 * self.delta
    }
}

/// How the noise enters the first factor of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Excitation {
    /// Independent cell increments.
    #[default]
    Increments,
    /// Exact compound-Poisson impulses (Poisson noise only).
    ImpulseStream,
}

/// Everything needed to draw one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec {
    pub system: SystemSpec,
    pub exponent: LevyExponent,
    pub grid: GridSpec,
    pub seed: u64,
    pub stream: u64,
    pub excitation: Excitation,
}

impl ProcessSpec {
    pub fn new(system: SystemSpec, exponent: LevyExponent, grid: GridSpec, seed: u64) -> Self {
        Self { system, exponent, grid, seed, stream: 0, excitation: Excitation::Increments }
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_excitation(mut self, excitation: Excitation) -> Self {
        self.excitation = excitation;
        self
    }

    pub fn noise(&self) -> Result<NoiseSpec> {
        Ok(NoiseSpec::new(self.exponent.clone(), self.seed, self.grid.delta)?.with_stream(self.stream))
    }
}

/// A synthesized path with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub path: SampledPath,
    /// Largest absolute cell increment (or impulse) of the driving noise.
    pub max_abs_increment: f64,
}

/// Per-cell driving terms for the first factor.
enum Drive {
    Increments(Vec<f64>),
    Impulses { locations: Vec<f64>, amplitudes: Vec<f64> },
}

/// First-order recursion driven by cell terms, with kernel `e^{βt}`.
/// `causal` runs forward (`1_+(t)e^{βt}`), otherwise backward
/// (`−1_+(−t)e^{βt}`).
fn driven_recursion(
    beta: Complex64,
    causal: bool,
    t_start: f64,
    delta: f64,
    n: usize,
    drive: &Drive,
) -> Vec<Complex64> {
    let mut terms = vec![Complex64::new(0.0, 0.0); n];
    match drive {
        Drive::Increments(u) => {
            // cell [t_k, t_{k+1}) enters at its midpoint
            let half = if causal { (beta * (0.5 * delta)).exp() } else { -(-beta * (0.5 * delta)).exp() };
            for (k, &v) in u.iter().enumerate().take(n) {
                terms[k] = half * v;
            }
        }
        Drive::Impulses { locations, amplitudes } => {
            for (&tau, &a) in locations.iter().zip(amplitudes) {
                let k = ((tau - t_start) / delta).floor();
                if k < 0.0 || k as usize >= n {
                    continue;
                }
                let k = k as usize;
                let cell_left = t_start + k as f64 * delta;
                terms[k] += if causal {
                    (beta * (cell_left + delta - tau)).exp() * a
                } else {
                    -(beta * (cell_left - tau)).exp() * a
                };
            }
        }
    }
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    if causal {
        let r = (beta * delta).exp();
        // y_0 only sees noise before the grid, which is absent
        for k in 1..n {
            y[k] = r * y[k - 1] + terms[k - 1];
        }
    } else {
        let r = (-beta * delta).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            acc = r * acc + terms[k];
            y[k] = acc;
        }
    }
    y
}

fn padded_grid(chain: &OperatorChain, grid: &GridSpec) -> (f64, usize, usize) {
    let mut left = 0.0;
    let mut right = 0.0;
    for f in &chain.factors {
        match f {
            Factor::StableInverse(a) => left += crate::operators::kernel_extent(*a),
            Factor::AntiCausalInverse(a) => right += crate::operators::kernel_extent(*a),
            Factor::Differential(b) => {
                left += b.len() as f64 * grid.delta;
                right += b.len() as f64 * grid.delta;
            }
            Factor::CorrectedIntegrator { .. } => {}
        }
    }
    let (mut lo, mut hi) = (grid.t_start, grid.t_end());
    if let Some((a, b)) = chain.boundary_span() {
        lo = lo.min(a);
        hi = hi.max(b);
    }
    let left_cells = ((grid.t_start - (lo - left)) / grid.delta - 1e-9).ceil().max(0.0) as usize;
    let right_cells = (((hi + right) - grid.t_end()) / grid.delta - 1e-9).ceil().max(0.0) as usize;
    // one spare cell on the right so that the last sample has a full cell
    (grid.t_start - left_cells as f64 * grid.delta, left_cells, left_cells + grid.n + right_cells + 1)
}

/// Reorders the chain so that the first factor is a first-order recursion
/// whenever possible (shift-invariant factors commute).
fn drivable_order(chain: &OperatorChain) -> Vec<Factor> {
    let mut factors = chain.factors.clone();
    if let Some(Factor::Differential(_)) = factors.first() {
        if let Some(pos) =
            factors.iter().position(|f| matches!(f, Factor::StableInverse(_) | Factor::AntiCausalInverse(_)))
        {
            let d = factors.remove(0);
            factors.insert(pos, d);
        }
    }
    factors
}

/// Draws one realization of `spec` without checking stationarity or
/// admissibility (see [`synth_stationary`] and [`synth_generalized_levy`]).
pub fn synthesize(spec: &ProcessSpec) -> Result<Synthesis> {
    let chain = factorize(&spec.system);
    let grid = &spec.grid;
    let (pad_start, offset, total) = padded_grid(&chain, grid);
    let delta = grid.delta;
    let drive = match spec.excitation {
        Excitation::Increments => {
            let sampler = IncrementSampler::new(&spec.exponent, delta)?;
            let mut rng = stream_rng(spec.seed, spec.stream);
            Drive::Increments(sampler.fill(&mut rng, total))
        }
        Excitation::ImpulseStream => {
            let ExponentKind::Poisson { rate, amplitude } = spec.exponent.kind else {
                return Err(Error::UnsupportedLaw(format!(
                    "impulse-stream excitation needs compound Poisson noise, got {}",
                    spec.exponent.label()
                )));
            };
            let duration = total as f64 * delta;
            let s = sample_impulse_stream(rate, duration, &amplitude, spec.seed, spec.stream)?;
            Drive::Impulses { locations: s.locations.iter().map(|t| t + pad_start).collect(), amplitudes: s.amplitudes }
        }
    };
    let max_abs_increment = match &drive {
        Drive::Increments(u) => u.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
        Drive::Impulses { amplitudes, .. } => amplitudes.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
    };
    let factors = drivable_order(&chain);
    let (first, rest): (Option<&Factor>, &[Factor]) = match factors.first() {
        Some(f @ (Factor::StableInverse(_) | Factor::AntiCausalInverse(_) | Factor::CorrectedIntegrator { .. })) => {
            (Some(f), &factors[1..])
        }
        _ => (None, &factors[..]),
    };
    let mut path = match first {
        Some(Factor::StableInverse(a)) => {
            SampledPath::new(pad_start, delta, driven_recursion(*a, true, pad_start, delta, total, &drive))?
        }
        Some(Factor::AntiCausalInverse(a)) => {
            SampledPath::new(pad_start, delta, driven_recursion(*a, false, pad_start, delta, total, &drive))?
        }
        Some(Factor::CorrectedIntegrator { omega0, t0 }) => {
            let beta = Complex64::new(0.0, *omega0);
            let z = SampledPath::new(pad_start, delta, driven_recursion(beta, true, pad_start, delta, total, &drive))?;
            // the running integral from the grid start minus its value at t0
            let (i, theta) = z.bracket(*t0)?;
            let at_t0 = Complex64::from_polar(1.0 - theta, omega0 * (t0 - z.t(i))) * z.values[i]
                + Complex64::from_polar(theta, omega0 * (t0 - z.t(i + 1))) * z.values[i + 1];
            let values = (0..z.len())
                .map(|k| z.values[k] - Complex64::from_polar(1.0, omega0 * (z.t(k) - t0)) * at_t0)
                .collect();
            z.with_values(values)
        }
        _ => {
            // no first-order factor: white noise as a piecewise-constant density
            let values = match &drive {
                Drive::Increments(u) => u.iter().map(|v| Complex64::new(v / delta, 0.0)).collect(),
                Drive::Impulses { locations, amplitudes } => {
                    let mut v = vec![Complex64::new(0.0, 0.0); total];
                    for (&t, &a) in locations.iter().zip(amplitudes) {
                        let k = ((t - pad_start) / delta).floor();
                        if k >= 0.0 && (k as usize) < total {
                            v[k as usize] += a / delta;
                        }
                    }
                    v
                }
            };
            SampledPath::new(pad_start, delta, values)?
        }
    };
    for f in rest {
        path = f.apply(&path, Direction::Forward)?;
    }
    Ok(Synthesis { path: path.slice(offset..offset + grid.n), max_abs_increment })
}

/// Stationary process (no imaginary poles).
pub fn synth_stationary(spec: &ProcessSpec) -> Result<SampledPath> {
    if spec.system.n0 > 0 {
        return Err(Error::UnsupportedSystem(format!(
            "system has {} purely imaginary pole(s); use synth_generalized_levy",
            spec.system.n0
        )));
    }
    Ok(synthesize(spec)?.path)
}

/// Generalized Lévy process (at least one imaginary pole); the noise must be
/// p-admissible for some `p ∈ [1, 2]`.
pub fn synth_generalized_levy(spec: &ProcessSpec) -> Result<SampledPath> {
    if spec.system.n0 == 0 {
        return Err(Error::UnsupportedSystem("system has no imaginary pole; use synth_stationary".into()));
    }
    require_admissible(&spec.exponent)?;
    Ok(synthesize(spec)?.path)
}

/// Either kind of process, dispatching on the pole structure.
pub fn synth_process(spec: &ProcessSpec) -> Result<SampledPath> {
    if spec.system.n0 == 0 {
        synth_stationary(spec)
    } else {
        synth_generalized_levy(spec)
    }
}

/// `count` independent realizations on streams `stream, stream+1, …`,
/// computed in parallel and returned in stream order.
pub fn synth_batch(spec: &ProcessSpec, count: usize) -> Result<Vec<SampledPath>> {
    Ok(synth_batch_diagnosed(spec, count)?.into_iter().map(|s| s.path).collect())
}

/// [`synth_batch`] keeping the per-realization diagnostics.
pub fn synth_batch_diagnosed(spec: &ProcessSpec, count: usize) -> Result<Vec<Synthesis>> {
    if spec.system.n0 > 0 {
        require_admissible(&spec.exponent)?;
    }
    (0..count as u64).into_par_iter().map(|r| synthesize(&spec.clone().with_stream(spec.stream + r))).collect()
}

/// Lévy motion `W(kΔ) = Σ_{i<k} u_i` with `W(0) = 0`.
pub fn synth_levy_motion(noise: &NoiseSpec, n: usize) -> Result<Vec<f64>> {
    let sampler = IncrementSampler::new(&noise.exponent, noise.delta)?;
    let mut rng = stream_rng(noise.seed, noise.stream);
    let mut w = Vec::with_capacity(n);
    let mut acc = 0.0;
    for k in 0..n {
        if k > 0 {
            acc += sampler.draw(&mut rng);
        }
        w.push(acc);
    }
    Ok(w)
}

/// Unit-lag increments `W(k) − W(k−1)` of a path sampled with spacing `delta`.
pub fn unit_increments(path: &[f64], delta: f64) -> Result<Vec<f64>> {
    let step = (1.0 / delta).round();
    if (step * delta - 1.0).abs() > 1e-9 || step < 1.0 {
        return Err(invalid(format!("unit lag is not a multiple of the spacing {delta}")));
    }
    let step = step as usize;
    Ok((step..path.len()).step_by(step).map(|k| path[k] - path[k - step]).collect())
}

/// Equal-width histogram normalized to a density.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    /// Samples outside `[edges[0], edges[last])`.
    pub outside: usize,
}

pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Histogram {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut outside = 0;
    for &x in samples {
        let b = ((x - lo) / width).floor();
        if b >= 0.0 && (b as usize) < bins {
            counts[b as usize] += 1;
        } else {
            outside += 1;
        }
    }
    let n = samples.len().max(1) as f64;
    Histogram {
        edges: (0..=bins).map(|i| lo + width * i as f64).collect(),
        density: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
        outside,
    }
}

/// One of the default Lévy motions of the gallery.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryFamily {
    pub name: &'static str,
    /// Human-readable triplet `(b1, b2, v)`.
    pub triplet: &'static str,
    pub exponent: LevyExponent,
}

/// Brownian motion, Lévy-Laplace motion, compound Poisson (rate 1/32, unit
/// Gaussian jumps) and a SαS flight with α = 1.2.
pub fn gallery_families() -> Vec<GalleryFamily> {
    vec![
        GalleryFamily { name: "brownian", triplet: "(0, 1, 0)", exponent: LevyExponent::gaussian() },
        GalleryFamily { name: "laplace", triplet: "(0, 0, e^-|a|/|a|)", exponent: LevyExponent::laplace() },
        GalleryFamily {
            name: "compound-poisson",
            triplet: "(0, 0, (1/32) N(0,1))",
            exponent: LevyExponent::poisson(1.0 / 32.0, AmplitudeLaw::standard_gaussian())
                .expect("valid default parameters"),
        },
        GalleryFamily {
            name: "sas-1.2",
            triplet: "(0, 0, C/|a|^2.2)",
            exponent: LevyExponent::sas(1.2).expect("valid default parameters"),
        },
    ]
}

/// A gallery path with its unit-increment histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryPath {
    pub family: GalleryFamily,
    pub times: Vec<f64>,
    pub path: Vec<f64>,
    pub increments: Vec<f64>,
    pub histogram: Histogram,
}

/// One Lévy motion per family on `[0, duration]` with spacing `delta`; family
/// `i` uses stream `i`.
pub fn gallery(
    families: &[GalleryFamily],
    duration: f64,
    delta: f64,
    seed: u64,
    bins: usize,
) -> Result<Vec<GalleryPath>> {
    let n = (duration / delta).round() as usize + 1;
    families
        .iter()
        .enumerate()
        .map(|(i, fam)| {
            let noise = NoiseSpec::new(fam.exponent.clone(), seed, delta)?.with_stream(i as u64);
            let path = synth_levy_motion(&noise, n)?;
            let increments = unit_increments(&path, delta)?;
            let mut sorted = increments.clone();
            sorted.sort_by(f64::total_cmp);
            // robust range: heavy tails would otherwise flatten the histogram
            let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
            let (lo, hi) = if sorted.is_empty() { (-1.0, 1.0) } else { (q(0.01), q(0.99)) };
            let half = lo.abs().max(hi.abs()).max(1e-3);
            let histogram = histogram(&increments, -half, half, bins);
            Ok(GalleryPath {
                family: fam.clone(),
                times: (0..n).map(|k| k as f64 * delta).collect(),
                path,
                increments,
                histogram,
            })
        })
        .collect()
}
