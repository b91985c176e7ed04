//! Sparse stochastic processes driven by Lévy white noise.
//!
//! A process is described by a whitening operator `L` (a rational system with
//! poles and zeros) and a Lévy exponent `f` that characterizes the innovation.
//! The crate samples such processes on uniform grids, evaluates their exact
//! transform-domain statistics by quadrature, and measures their
//! compressibility in wavelet and Fourier-type bases.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod id_laws;
pub mod montecarlo;
pub mod noise;
pub mod operators;
pub mod quadrature;
pub mod rng;
pub mod statistics;
pub mod synth;
pub mod wavelets;

pub use config::{ExperimentConfig, ExperimentKind, OutputFormat};
pub use error::{Error, Result};
pub use experiments::Table;
pub use id_laws::{LevyExponent, LevyTriplet};
pub use noise::NoiseSpec;
pub use operators::{SampledPath, SystemSpec};
pub use statistics::TestFunction;
pub use synth::{GridSpec, ProcessSpec};
pub use wavelets::WaveletBasis;
