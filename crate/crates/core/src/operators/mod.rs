//! Inverse operators of rational whitening operators on uniform grids.

mod chain;
mod differential;
mod first_order;
mod path;
mod system;

pub use chain::{apply_chain, apply_chain_stages, factorize, Factor, OperatorChain};
pub use differential::{apply_differential, difference_stencil};
pub use first_order::{
    corrected_adjoint, corrected_integrator, green_function, green_path, integrator, integrator_adjoint, stable_inverse,
};
pub use path::{kernel_extent, Direction, SampledPath};
pub use system::{imag_tolerance, poly_from_roots, polynomial_roots, SystemSpec};
