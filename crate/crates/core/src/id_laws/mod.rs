//! Infinitely divisible laws: Lévy triplets and exponents, admissibility and
//! positive-definiteness probes, and inversion of characteristic functions.

mod admissibility;
mod density;
mod exponent;
mod khintchine;
mod pdf;

pub use admissibility::{
    admissible_order, log_grid, p_admissibility_margin, probe_p_admissibility, psd_check, psd_check_exponent,
    require_admissible, AdmissibilityProbe, PsdReport, PSD_TOLERANCE,
};
pub use density::{sas_constant, AmplitudeLaw, CustomDensity, LevyDensity, LevyTriplet};
pub use exponent::{moment_finite, sparsity_index, ExponentKind, LevyExponent};
pub use khintchine::{admissibility_integral, compensated_drift, jump_variance, levy_khintchine, tail_moment};
pub use pdf::{
    char_to_pdf, pdf_from_exponent, AmplitudeGrid, CharGrid, GridDomain, InversionOptions, PdfInversion, WindowPolicy,
};
