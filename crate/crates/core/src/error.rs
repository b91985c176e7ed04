use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge (achieved error estimate {achieved:.3e}, requested {requested:.3e})")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("Lévy measure violates the admissibility condition: {0}")]
    AdmissibilityViolation(String),

    #[error("unsupported noise law: {0}")]
    UnsupportedLaw(String),

    #[error("unsupported system: {0}")]
    UnsupportedSystem(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("point {t} lies outside the grid [{start}, {end}]")]
    OutsideGrid { t: f64, start: f64, end: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("correlation sequence is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),

    #[error("configuration error{}: {message}", location(*line, key.as_deref()))]
    Config { message: String, line: Option<usize>, key: Option<String> },
}

fn location(line: Option<usize>, key: Option<&str>) -> String {
    match (line, key) {
        (Some(l), Some(k)) => format!(" at line {l}, key `{k}`"),
        (Some(l), None) => format!(" at line {l}"),
        (None, Some(k)) => format!(" at key `{k}`"),
        (None, None) => String::new(),
    }
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::QuadratureNonConvergence { .. } => "quadrature_non_convergence",
            Error::AdmissibilityViolation(_) => "admissibility_violation",
            Error::UnsupportedLaw(_) => "unsupported_law",
            Error::UnsupportedSystem(_) => "unsupported_system",
            Error::RootFinding(_) => "root_finding",
            Error::OutsideGrid { .. } => "outside_grid",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::NotPositiveDefinite(_) => "not_positive_definite",
            Error::Config { .. } => "config",
        }
    }

    /// `{"error": {"kind", "message", "line"?, "key"?}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut body = serde_json::json!({ "kind": self.kind(), "message": self.to_string() });
        if let Error::Config { line, key, .. } = self {
            if let Some(l) = line {
                body["line"] = serde_json::json!(l);
            }
            if let Some(k) = key {
                body["key"] = serde_json::json!(k);
            }
        }
        serde_json::json!({ "error": body })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
