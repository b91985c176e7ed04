//! Experiment runners behind the command-line interface. Each returns
//! in-memory tables; rendering is byte-deterministic for a given config.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{config_error, ExperimentConfig, ExperimentKind, NoiseConfig};
use crate::error::{Error, Result};
use crate::id_laws::{pdf_from_exponent, AmplitudeGrid, AmplitudeLaw, ExponentKind, InversionOptions, LevyExponent};
use crate::montecarlo::{median, sample_mean_var};
use crate::operators::{SampledPath, SystemSpec};
use crate::statistics::{
    adjoint_response, autocorrelation, first_order_pdf, noise_variance, power_spectrum, spectrum_from_autocorrelation,
    KernelExponent,
};
use crate::synth::{gallery, gallery_families, synth_batch_diagnosed, synth_stationary, GridSpec, ProcessSpec};
use crate::wavelets::{dct_basis, espline_basis, klt_basis, m_term_curve, DenseBasis, OrthoTransform, WaveletBasis};

/// A table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

/// A named output table with free-form notes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.into(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    /// `# config: <json>`, one `# key: value` line per note, header, rows.
    pub fn to_csv(&self, config_json: &str) -> String {
        let mut s = format!("# config: {config_json}\n");
        for (k, v) in &self.notes {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self, config: &ExperimentConfig) -> String {
        let notes: serde_json::Map<_, _> = self.notes.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let v = json!({
            "name": self.name,
            "config": config,
            "notes": notes,
            "columns": self.columns,
            "rows": self.rows,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("table serializes");
        s.push('\n');
        s
    }
}

/// Dispatches on `kind` after checking the config's own tag.
pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    cfg.check_kind(kind)?;
    match kind {
        ExperimentKind::Simulate => run_simulate(cfg),
        ExperimentKind::Pdf => run_pdf(cfg),
        ExperimentKind::Stats => run_stats(cfg),
        ExperimentKind::Mterm => run_mterm(cfg),
        ExperimentKind::LevyGallery => run_gallery(cfg),
    }
}

fn process_spec(cfg: &ExperimentConfig) -> Result<ProcessSpec> {
    Ok(ProcessSpec::new(cfg.system.build()?, cfg.noise.build()?, cfg.grid.build()?, cfg.seed)
        .with_excitation(cfg.simulate.excitation()))
}

/// Sample paths, one row per (realization, time).
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let spec = process_spec(cfg)?;
    let count = cfg.realizations_or(1);
    let runs = synth_batch_diagnosed(&spec, count)?;
    let max_increment = runs.iter().map(|s| s.max_abs_increment).fold(0.0, f64::max);
    let paths: Vec<_> = runs.into_iter().map(|s| s.path).collect();
    let complex = paths.iter().any(|p| p.relative_imaginary() > 1e-9);
    let mut t = if complex {
        Table::new("paths", &["realization", "t", "value", "imag"])
    } else {
        Table::new("paths", &["realization", "t", "value"])
    };
    for (r, p) in paths.iter().enumerate() {
        for (k, v) in p.values.iter().enumerate() {
            let mut row = vec![Cell::from(r), p.t(k).into(), v.re.into()];
            if complex {
                row.push(v.im.into());
            }
            t.push(row);
        }
    }
    t.note("noise", spec.exponent.label());
    t.note("realizations", count);
    t.note("max_abs_increment", max_increment);
    Ok(vec![t])
}

fn pdf_table(name: &str, system: &SystemSpec, f: &LevyExponent, cfg: &ExperimentConfig) -> Result<Table> {
    let p = &cfg.pdf;
    let out = AmplitudeGrid::covering(p.x_max, p.step).map_err(|e| config_error(e.to_string(), "pdf"))?;
    let inv = first_order_pdf(system, f, p.t, p.delta, &out, &p.inversion())?;
    let mut t = Table::new(name, &["x", "pdf"]);
    for (x, v) in inv.pdf.axis.iter().zip(&inv.pdf.values) {
        t.push(vec![(*x).into(), v.re.into()]);
    }
    t.note("t", p.t);
    t.note("mass_defect", inv.mass_defect);
    t.note("min_value", inv.min_value);
    t.note("windowed", inv.windowed);
    t.note("alias_warning", inv.alias_warning);
    Ok(t)
}

/// First-order density of `s(pdf.t)`.
pub fn run_pdf(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let system = cfg.system.build()?;
    let f = cfg.noise.build()?;
    Ok(vec![pdf_table("pdf", &system, &f, cfg)?])
}

/// `2^{-j/2}(1_{[0,2^{j-1})} − 1_{[2^{j-1},2^j)})` on a grid of spacing `delta`.
fn haar_wavelet_path(level: usize, delta: f64) -> Result<SampledPath> {
    let len = 2f64.powi(level as i32);
    let n = (len / delta).round() as usize;
    let amp = len.powf(-0.5);
    SampledPath::from_fn(0.0, delta, n, |t| num_complex::Complex64::new(if t < len / 2.0 { amp } else { -amp }, 0.0))
}

/// Autocorrelation, power spectrum (closed form and from the
/// autocorrelation), first-order pdf and Haar wavelet-domain exponents.
pub fn run_stats(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let system = cfg.system.build()?;
    let f = cfg.noise.build()?;
    let s = &cfg.stats;
    if !(s.delta > 0.0) || !(s.max_lag >= 0.0) || s.n_omega == 0 {
        return Err(config_error("stats needs delta > 0, max_lag ≥ 0 and n_omega ≥ 1", "stats"));
    }
    let omegas: Vec<f64> = if s.n_omega == 1 {
        vec![0.0]
    } else {
        (0..s.n_omega).map(|k| s.omega_max * k as f64 / (s.n_omega - 1) as f64).collect()
    };
    let mut tables = Vec::new();
    let second_order = if !system.is_stationary() {
        Err("system is not stationary")
    } else if noise_variance(&f).is_err() {
        Err("noise has infinite variance")
    } else {
        Ok(())
    };
    match second_order {
        Ok(()) => {
            let lags = (s.max_lag / s.delta).round() as usize;
            let r = autocorrelation(&system, &f, s.delta, lags)?;
            let mut t = Table::new("autocorrelation", &["tau", "r"]);
            for (k, v) in r.values.iter().enumerate() {
                t.push(vec![r.t(k).into(), v.re.into()]);
            }
            tables.push(t);
            // the transform of r is only faithful once r has decayed
            let long = autocorrelation(
                &system,
                &f,
                s.delta,
                lags.max((crate::operators::factorize(&system).kernel_extent() / s.delta) as usize),
            )?;
            let phi = power_spectrum(&system, &f, &omegas)?;
            let from_r = spectrum_from_autocorrelation(&long, &omegas);
            let mut t = Table::new("spectrum", &["omega", "phi", "phi_from_autocorrelation"]);
            for ((w, p), q) in omegas.iter().zip(&phi.values).zip(&from_r) {
                t.push(vec![(*w).into(), p.re.into(), (*q).into()]);
            }
            tables.push(t);
        }
        Err(reason) => {
            let mut t = Table::new("autocorrelation", &["tau", "r"]);
            t.note("skipped", reason);
            tables.push(t);
        }
    }
    tables.push(pdf_table("pdf", &system, &f, cfg)?);
    let mut t = Table::new("wavelet_exponents", &["level", "omega", "re", "im"]);
    for level in 1..=s.wavelet_levels {
        let kernel = adjoint_response(&system, &haar_wavelet_path(level, s.delta)?)?;
        let g = KernelExponent::new(&f, &kernel)?;
        for &w in &omegas {
            let v = g.eval(w)?;
            t.push(vec![level.into(), w.into(), v.re.into(), v.im.into()]);
        }
    }
    t.note("wavelet", "Haar on [0, 2^level), analyzed through L^{-1*}");
    tables.push(t);
    Ok(tables)
}

/// A transform used in the compression benchmark.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformTag {
    Klt,
    Dct,
    Haar,
    Espline(f64),
}

impl TransformTag {
    /// `klt`, `dct`, `haar`, `espline` (uses `default_alpha`) or `espline(α)`.
    pub fn parse(tag: &str, default_alpha: f64) -> Result<Self> {
        let t = tag.trim();
        match t {
            "klt" => Ok(TransformTag::Klt),
            "dct" => Ok(TransformTag::Dct),
            "haar" => Ok(TransformTag::Haar),
            "espline" => Ok(TransformTag::Espline(default_alpha)),
            _ => t
                .strip_prefix("espline(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|a| a.trim().parse().ok())
                .map(TransformTag::Espline)
                .ok_or_else(|| config_error(format!("unknown transform `{t}`"), "mterm.transforms")),
        }
    }

    pub fn label(&self) -> String {
        match self {
            TransformTag::Klt => "klt".into(),
            TransformTag::Dct => "dct".into(),
            TransformTag::Haar => "haar".into(),
            TransformTag::Espline(a) => format!("espline({a})"),
        }
    }
}

enum Built {
    Dense(DenseBasis),
    Wavelet(WaveletBasis),
}

impl Built {
    fn as_dyn(&self) -> &dyn OrthoTransform {
        match self {
            Built::Dense(d) => d,
            Built::Wavelet(w) => w,
        }
    }
}

/// One point of an M-term error curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MtermPoint {
    pub m_over_n: f64,
    pub m: usize,
    pub mean: f64,
    /// Half-width of the normal 95% confidence interval of the mean.
    pub ci95: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MtermCurve {
    pub noise: String,
    pub transform: String,
    pub realizations: usize,
    pub points: Vec<MtermPoint>,
}

/// AR(1) realization `s(k)`, `k < n`, synthesized with spacing `fine_delta`
/// and decimated to unit spacing.
pub fn ar1_samples(
    alpha: f64,
    f: &LevyExponent,
    n: usize,
    fine_delta: f64,
    seed: u64,
    stream: u64,
) -> Result<Vec<f64>> {
    let factor = (1.0 / fine_delta).round();
    if !(fine_delta > 0.0) || (factor * fine_delta - 1.0).abs() > 1e-9 {
        return Err(config_error(
            format!("1/fine_delta must be an integer, got fine_delta = {fine_delta}"),
            "mterm.fine_delta",
        ));
    }
    let factor = factor as usize;
    let system = SystemSpec::first_order(num_complex::Complex64::new(alpha, 0.0))?;
    let grid = GridSpec::new(0.0, fine_delta, (n - 1) * factor + 1)?;
    let spec = ProcessSpec::new(system, f.clone(), grid, seed).with_stream(stream);
    let path = synth_stationary(&spec)?;
    Ok(path.values.iter().step_by(factor).map(|v| v.re).collect())
}

/// Mean/CI/median M-term error curves per (noise, transform).
pub fn mterm_curves(cfg: &ExperimentConfig) -> Result<Vec<MtermCurve>> {
    let m = &cfg.mterm;
    let n = m.n;
    if n < 2 || !n.is_power_of_two() {
        return Err(config_error(format!("mterm.n must be a power of two ≥ 2, got {n}"), "mterm.n"));
    }
    if !(m.alpha < 0.0) {
        return Err(config_error("mterm.alpha must be negative (stationary AR(1))", "mterm.alpha"));
    }
    if m.m_fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(config_error("M/N fractions must lie in [0, 1]", "mterm.m_fractions"));
    }
    let realizations = cfg.realizations_or(200);
    if realizations == 0 {
        return Err(config_error("at least one realization is needed", "realizations"));
    }
    let levels = m.levels.unwrap_or(n.trailing_zeros() as usize);
    let tags = m.transforms.iter().map(|t| TransformTag::parse(t, m.alpha)).collect::<Result<Vec<_>>>()?;
    let transforms = tags
        .iter()
        .map(|t| {
            Ok(match t {
                // formal correlation of the sampled AR(1), also used for Cauchy input
                TransformTag::Klt => {
                    Built::Dense(klt_basis(&(0..n).map(|k| (m.alpha * k as f64).exp()).collect::<Vec<_>>())?)
                }
                TransformTag::Dct => Built::Dense(dct_basis(n)?),
                TransformTag::Haar => Built::Wavelet(
                    espline_basis(0.0, 0.0, 1.0, n, levels).map_err(|e| config_error(e.to_string(), "mterm.levels"))?,
                ),
                TransformTag::Espline(a) => Built::Wavelet(
                    espline_basis(*a, 0.0, 1.0, n, levels).map_err(|e| config_error(e.to_string(), "mterm"))?,
                ),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ms: Vec<usize> = m.m_fractions.iter().map(|f| (f * n as f64).round() as usize).collect();
    let mut curves = Vec::new();
    for tag in &m.noises {
        let noise = NoiseConfig::from_tag(tag)?.build()?;
        // errors[r][transform][m]
        let errors: Vec<Vec<Vec<f64>>> = (0..realizations as u64)
            .into_par_iter()
            .map(|r| {
                let x = ar1_samples(m.alpha, &noise, n, m.fine_delta, cfg.seed, r)?;
                transforms.iter().map(|t| m_term_curve(&x, t.as_dyn(), &ms)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for (ti, t) in tags.iter().enumerate() {
            let points = ms
                .iter()
                .enumerate()
                .map(|(mi, &mm)| {
                    let e: Vec<f64> = errors.iter().map(|r| r[ti][mi]).collect();
                    if let Some(bad) = e.iter().find(|v| !v.is_finite()) {
                        return Err(Error::InvalidParameter(format!("non-finite M-term error {bad}")));
                    }
                    let (mean, var) = sample_mean_var(&e);
                    Ok(MtermPoint {
                        m_over_n: m.m_fractions[mi],
                        m: mm,
                        mean,
                        ci95: 1.96 * (var / e.len() as f64).sqrt(),
                        median: median(&e),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            curves.push(MtermCurve { noise: tag.clone(), transform: t.label(), realizations, points });
        }
    }
    Ok(curves)
}

/// The compression benchmark as a table.
pub fn run_mterm(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let curves = mterm_curves(cfg)?;
    let mut t = Table::new("mterm", &["noise", "transform", "m_over_n", "m", "mean", "ci95", "median"]);
    for c in &curves {
        for p in &c.points {
            t.push(vec![
                c.noise.as_str().into(),
                c.transform.as_str().into(),
                p.m_over_n.into(),
                p.m.into(),
                p.mean.into(),
                p.ci95.into(),
                p.median.into(),
            ]);
        }
    }
    t.note("realizations", cfg.realizations_or(200));
    t.note("klt_correlation", format!("exp({}·|m−n|) for every noise", cfg.mterm.alpha));
    Ok(vec![t])
}

/// Continuous part of the unit-time compound-Poisson law with Gaussian
/// amplitudes: `Σ_{k≥1} e^{−λ} λ^k/k! · N(x; k·μ, k·σ²)`.
fn poisson_gaussian_density(x: f64, rate: f64, mean: f64, std: f64) -> f64 {
    let mut total = 0.0;
    let mut weight = (-rate).exp();
    for k in 1..200 {
        weight *= rate / k as f64;
        let var = k as f64 * std * std;
        total += weight * (-(x - k as f64 * mean).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
        if weight < 1e-300 {
            break;
        }
    }
    total
}

fn interpolate(axis: &[f64], values: &[f64], x: f64) -> f64 {
    let step = axis[1] - axis[0];
    let pos = (x - axis[0]) / step;
    if pos < 0.0 || pos >= (axis.len() - 1) as f64 {
        return 0.0;
    }
    let i = pos.floor() as usize;
    let th = pos - i as f64;
    (1.0 - th) * values[i] + th * values[i + 1]
}

/// Lévy motions of the four default families, their unit-increment
/// histograms and model densities.
pub fn run_gallery(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let g = &cfg.gallery;
    if !(g.duration > 0.0) || !(g.delta > 0.0) || g.bins == 0 {
        return Err(config_error("gallery needs duration > 0, delta > 0 and bins ≥ 1", "gallery"));
    }
    let paths = gallery(&gallery_families(), g.duration, g.delta, cfg.seed, g.bins)
        .map_err(|e| config_error(e.to_string(), "gallery"))?;
    let mut pt = Table::new("gallery_paths", &["family", "t", "value"]);
    let mut ht = Table::new("gallery_histograms", &["family", "bin_lo", "bin_hi", "density", "model_density"]);
    let mut st = Table::new("gallery_increments", &["family", "triplet", "count", "zero_fraction", "model_zero_mass"]);
    for p in &paths {
        let name = p.family.name;
        for (t, v) in p.times.iter().zip(&p.path) {
            pt.push(vec![name.into(), (*t).into(), (*v).into()]);
        }
        let edges = &p.histogram.edges;
        let width = edges[1] - edges[0];
        let centers: Vec<f64> = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let model: Vec<Option<f64>> = match p.family.exponent.kind {
            ExponentKind::Poisson { rate, amplitude: AmplitudeLaw::Gaussian { mean, std } } => {
                centers.iter().map(|&x| Some(poisson_gaussian_density(x, rate, mean, std))).collect()
            }
            ExponentKind::Poisson { .. } => vec![None; centers.len()],
            _ => {
                let reach = edges[0].abs().max(edges[edges.len() - 1].abs());
                let grid = AmplitudeGrid::covering(reach + width, width / 8.0)?;
                let inv = pdf_from_exponent(|w| p.family.exponent.eval(w), &grid, &InversionOptions::default())?;
                let axis = &inv.pdf.axis;
                let vals = inv.pdf.real_values();
                centers.iter().map(|&x| Some(interpolate(axis, &vals, x))).collect()
            }
        };
        for ((w, d), m) in edges.windows(2).zip(&p.histogram.density).zip(model) {
            ht.push(vec![name.into(), w[0].into(), w[1].into(), (*d).into(), m.map_or(Cell::Empty, Cell::Num)]);
        }
        let zeros = p.increments.iter().filter(|v| **v == 0.0).count();
        let atom = match p.family.exponent.kind {
            ExponentKind::Poisson { rate, .. } => Cell::Num((-rate).exp()),
            _ => Cell::Num(0.0),
        };
        let frac = zeros as f64 / p.increments.len().max(1) as f64;
        st.push(vec![name.into(), p.family.triplet.into(), p.increments.len().into(), frac.into(), atom]);
    }
    ht.note("model", "continuous part of the unit-increment law; the Poisson atom at 0 is reported separately");
    Ok(vec![pt, ht, st])
}
