//! Periodic grid, transforms, fields, vector calculus and Lebesgue norms.

mod calculus;
pub mod checkpoint;
mod field;
mod grid;
mod random;

pub use calculus::{
    dealias, dealiased_physical, divergence, divergence_max, gradient, gradient_lp_norm, laplacian,
    leray_project, lp_norm, lp_norm_samples, magnitude_lp_norm, multiply_dealiased, partial,
    product_to_spectral, vector_lp_norm,
};
pub(crate) use calculus::check_exponent;
pub use field::{ScalarField, VectorField};
pub use grid::{make_grid, Grid};
pub use random::{random_scalar, random_solenoidal, SpectrumShape};
