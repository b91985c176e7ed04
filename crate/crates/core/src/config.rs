//! TOML experiment configuration.
//!
//! Every section is optional and falls back to the defaults below; unknown
//! keys are rejected. The resolved configuration (defaults filled in,
//! command-line overrides applied) serializes back to JSON for provenance
//! lines in the output files.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id_laws::{AmplitudeLaw, InversionOptions, LevyExponent, WindowPolicy};
use crate::operators::SystemSpec;
use crate::synth::{Excitation, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Pdf,
    Stats,
    Mterm,
    LevyGallery,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Pdf => "pdf",
            ExperimentKind::Stats => "stats",
            ExperimentKind::Mterm => "mterm",
            ExperimentKind::LevyGallery => "levy-gallery",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A complex number written as `x` or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            ComplexValue::Real(x) => Complex64::new(x, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemConfig {
    /// Poles of `L^{-1}` (roots of the denominator).
    pub poles: Vec<ComplexValue>,
    /// Numerator coefficients, lowest order first.
    pub numerator: Vec<ComplexValue>,
    /// One point per imaginary pole; all zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_points: Option<Vec<f64>>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self { poles: vec![ComplexValue::Real(-1.0)], numerator: vec![ComplexValue::Real(1.0)], boundary_points: None }
    }
}

impl SystemConfig {
    pub fn build(&self) -> Result<SystemSpec> {
        let poles: Vec<_> = self.poles.iter().map(|p| p.to_complex()).collect();
        let b: Vec<_> = self.numerator.iter().map(|p| p.to_complex()).collect();
        SystemSpec::from_poles(&poles, &b, self.boundary_points.clone()).map_err(|e| keyed("system", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AmplitudeConfig {
    Gaussian {
        #[serde(default)]
        mean: f64,
        #[serde(default = "one")]
        std: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Laplace {
        #[serde(default = "one")]
        scale: f64,
    },
}

impl Default for AmplitudeConfig {
    fn default() -> Self {
        AmplitudeConfig::Gaussian { mean: 0.0, std: 1.0 }
    }
}

impl AmplitudeConfig {
    pub fn build(&self) -> AmplitudeLaw {
        match *self {
            AmplitudeConfig::Gaussian { mean, std } => AmplitudeLaw::Gaussian { mean, std },
            AmplitudeConfig::Uniform { lo, hi } => AmplitudeLaw::Uniform { lo, hi },
            AmplitudeConfig::Laplace { scale } => AmplitudeLaw::Laplace { scale },
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NoiseConfig {
    Gaussian {
        #[serde(default = "one")]
        variance: f64,
    },
    Laplace,
    Poisson {
        rate: f64,
        #[serde(default)]
        amplitude: AmplitudeConfig,
    },
    Sas {
        alpha: f64,
    },
    /// Symmetric Cauchy, i.e. `sas` with `alpha = 1`.
    Cauchy,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig::Gaussian { variance: 1.0 }
    }
}

impl NoiseConfig {
    pub fn build(&self) -> Result<LevyExponent> {
        let f = match self {
            NoiseConfig::Gaussian { variance } => {
                LevyExponent::new(crate::id_laws::ExponentKind::Gaussian { variance: *variance })
            }
            NoiseConfig::Laplace => Ok(LevyExponent::laplace()),
            NoiseConfig::Poisson { rate, amplitude } => LevyExponent::poisson(*rate, amplitude.build()),
            NoiseConfig::Sas { alpha } => LevyExponent::sas(*alpha),
            NoiseConfig::Cauchy => LevyExponent::sas(1.0),
        };
        f.map_err(|e| keyed("noise", e))
    }

    /// Parses the short names used in lists (`gaussian`, `laplace`, `cauchy`, `sas(1.5)`).
    pub fn from_tag(tag: &str) -> Result<Self> {
        let t = tag.trim();
        match t {
            "gaussian" => Ok(NoiseConfig::Gaussian { variance: 1.0 }),
            "laplace" => Ok(NoiseConfig::Laplace),
            "cauchy" => Ok(NoiseConfig::Cauchy),
            _ => match parse_call(t, "sas") {
                Some(alpha) => Ok(NoiseConfig::Sas { alpha }),
                None => Err(config_error(format!("unknown noise tag `{t}`"), "mterm.noises")),
            },
        }
    }
}

fn parse_call(s: &str, name: &str) -> Option<f64> {
    s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub t_start: f64,
    pub delta: f64,
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { t_start: 0.0, delta: 0.0625, n: 1024 }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<GridSpec> {
        GridSpec::new(self.t_start, self.delta, self.n).map_err(|e| keyed("grid", e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExcitationConfig {
    #[default]
    Increments,
    Impulses,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub excitation: ExcitationConfig,
}

impl SimulateConfig {
    pub fn excitation(&self) -> Excitation {
        match self.excitation {
            ExcitationConfig::Increments => Excitation::Increments,
            ExcitationConfig::Impulses => Excitation::ImpulseStream,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowConfig {
    #[default]
    Never,
    Auto,
    Always,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PdfConfig {
    /// Time at which the marginal law is evaluated.
    pub t: f64,
    /// Grid spacing of the kernel `L^{-1*}δ_t`.
    pub delta: f64,
    pub x_max: f64,
    pub step: f64,
    pub window: WindowConfig,
}

impl Default for PdfConfig {
    fn default() -> Self {
        Self { t: 1.0, delta: 1e-3, x_max: 5.0, step: 0.01, window: WindowConfig::Never }
    }
}

impl PdfConfig {
    pub fn inversion(&self) -> InversionOptions {
        let window = match self.window {
            WindowConfig::Never => WindowPolicy::Never,
            WindowConfig::Auto => WindowPolicy::Auto,
            WindowConfig::Always => WindowPolicy::Always,
        };
        InversionOptions { window, ..InversionOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StatsConfig {
    pub delta: f64,
    pub max_lag: f64,
    pub omega_max: f64,
    pub n_omega: usize,
    /// Haar levels whose wavelet-domain exponents are reported.
    pub wavelet_levels: usize,
}

impl Default for StatsConfig {
    fn default() -> Self {
        Self { delta: 0.01, max_lag: 20.0, omega_max: 10.0, n_omega: 201, wavelet_levels: 4 }
    }
}

/// Transform names: `klt`, `dct`, `haar`, `espline` (matched to `mterm.alpha`)
/// or `espline(α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MtermConfig {
    pub alpha: f64,
    pub n: usize,
    /// Synthesis spacing; `1/fine_delta` must be an integer decimation factor.
    pub fine_delta: f64,
    pub noises: Vec<String>,
    pub transforms: Vec<String>,
    pub m_fractions: Vec<f64>,
    /// Wavelet depth; `log2(n)` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

pub const DEFAULT_M_FRACTIONS: [f64; 17] =
    [0.01, 0.02, 0.03, 0.05, 0.075, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

impl Default for MtermConfig {
    fn default() -> Self {
        Self {
            alpha: -0.1,
            n: 1024,
            fine_delta: 0.0625,
            noises: vec!["gaussian".into(), "cauchy".into()],
            transforms: vec!["klt".into(), "dct".into(), "haar".into(), "espline".into()],
            m_fractions: DEFAULT_M_FRACTIONS.to_vec(),
            levels: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GalleryConfig {
    pub duration: f64,
    pub delta: f64,
    pub bins: usize,
}

impl Default for GalleryConfig {
    fn default() -> Self {
        Self { duration: 256.0, delta: 0.0625, bins: 41 }
    }
}

/// Full experiment configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default)]
    pub seed: u64,
    /// Experiment-specific default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub pdf: PdfConfig,
    #[serde(default)]
    pub stats: StatsConfig,
    #[serde(default)]
    pub mterm: MtermConfig,
    #[serde(default)]
    pub gallery: GalleryConfig,
}

pub(crate) fn config_error(message: impl Into<String>, key: &str) -> Error {
    Error::Config { message: message.into(), line: None, key: Some(key.to_string()) }
}

fn keyed(key: &str, e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => config_error(other.to_string(), key),
    }
}

/// Line of the first `key = …` assignment at or after `from` (1-based).
///
/// Errors inside internally tagged tables are reported at the table header;
/// this moves them to the offending assignment.
fn assignment_line(text: &str, from: usize, key: &str) -> Option<usize> {
    text.lines().enumerate().skip(from - 1).find_map(|(i, l)| {
        let rest = l.trim_start().strip_prefix(key)?;
        rest.trim_start().starts_with('=').then_some(i + 1)
    })
}

/// Key assigned on line `line` (1-based), if that line is an assignment.
fn assigned_key(text: &str, line: usize) -> Option<String> {
    let (k, _) = text.lines().nth(line - 1)?.split_once('=')?;
    let k = k.trim().trim_matches('"');
    (!k.is_empty() && !k.starts_with('[')).then(|| k.to_string())
}

fn backticked(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

impl ExperimentConfig {
    /// Parses TOML, reporting the line and offending key on failure.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
            let message = e.message().trim().to_string();
            let names_field =
                ["unknown field", "missing field", "duplicate key"].iter().any(|p| message.starts_with(p));
            let (key, line) = if names_field {
                let key = backticked(&message);
                let line = match (line, &key) {
                    (Some(l), Some(k)) => assignment_line(text, l, k).or(Some(l)),
                    _ => line,
                };
                (key, line)
            } else {
                (line.and_then(|l| assigned_key(text, l)), line)
            };
            Error::Config { key, line, message }
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            message: format!("cannot read {}: {e}", path.display()),
            line: None,
            key: None,
        })?;
        Self::from_toml(&text)
    }

    pub fn realizations_or(&self, default: usize) -> usize {
        self.realizations.unwrap_or(default)
    }

    /// Single-line JSON of the resolved configuration.
    pub fn resolved_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    /// Checks that the `experiment` tag, if present, matches `kind`.
    pub fn check_kind(&self, kind: ExperimentKind) -> Result<()> {
        match self.experiment {
            Some(k) if k != kind => Err(config_error(
                format!("config is for `{}` but `{}` was requested", k.name(), kind.name()),
                "experiment",
            )),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let c = ExperimentConfig::from_toml("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert_eq!(c.mterm.m_fractions.len(), 17);
    }

    #[test]
    fn parses_sections() {
        let c = ExperimentConfig::from_toml(
            r#"
seed = 7
[system]
poles = [0.0, [-1.0, 2.0], [-1.0, -2.0]]
numerator = [1.0]
boundary_points = [0.5]
[noise]
kind = "poisson"
rate = 0.25
amplitude = { kind = "uniform", lo = -1.0, hi = 2.0 }
"#,
        )
        .unwrap();
        assert_eq!(c.seed, 7);
        let sys = c.system.build().unwrap();
        assert_eq!(sys.n0, 1);
        assert!(c.noise.build().is_ok());
        // the resolved form parses back to the same config
        let back: ExperimentConfig = serde_json::from_str(&c.resolved_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_key_reports_line_and_key() {
        let err = ExperimentConfig::from_toml("seed = 1\n[grid]\ndelta = 0.1\nsteps = 4\n").unwrap_err();
        match err {
            Error::Config { line, key, .. } => {
                assert_eq!(line, Some(4));
                assert_eq!(key.as_deref(), Some("steps"));
            }
            other => panic!("{other:?}"),
        }
        assert!(ExperimentConfig::from_toml("[noise]\nkind = \"sas\"\nalpha = 1.0\nbeta = 2\n").is_err());
        assert!(ExperimentConfig::from_toml("colour = 1").is_err());
    }

    #[test]
    fn bad_values_report_their_assignment() {
        let err = ExperimentConfig::from_toml("seed = 1\n[grid]\nn = \"many\"\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: Some(3), key: Some(ref k), .. } if k == "n"), "{err:?}");
        let err = ExperimentConfig::from_toml("[simulate]\n\nexcitation = \"sparks\"\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: Some(3), key: Some(ref k), .. } if k == "excitation"), "{err:?}");
        // a partial table keeps the remaining defaults
        let c = ExperimentConfig::from_toml("[system]\npoles = [0.0]\n").unwrap();
        assert_eq!(c.system.numerator, SystemConfig::default().numerator);
    }

    #[test]
    fn semantic_errors_carry_key() {
        let c = ExperimentConfig::from_toml("[grid]\ndelta = -1.0").unwrap();
        assert!(matches!(c.grid.build(), Err(Error::Config { key: Some(k), .. }) if k == "grid"));
        assert!(c.check_kind(ExperimentKind::Pdf).is_ok());
        let c = ExperimentConfig::from_toml("experiment = \"mterm\"").unwrap();
        assert!(c.check_kind(ExperimentKind::Pdf).is_err());
    }

    #[test]
    fn noise_tags() {
        assert_eq!(NoiseConfig::from_tag("sas(1.5)").unwrap(), NoiseConfig::Sas { alpha: 1.5 });
        assert!(NoiseConfig::from_tag("student").is_err());
    }
}
