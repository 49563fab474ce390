//! Pseudo-spectral incompressible MHD on the periodic torus, instrumented with
//! Littlewood–Paley band operators, Besov / Chemin–Lerner / Lorentz norms, Bony
//! paraproducts, and numerical harnesses for the estimates that drive
//! well-posedness in critical Besov spaces.

pub mod bony;
pub mod calibration;
pub mod error;
pub mod experiments;
pub mod littlewood_paley;
pub mod mhd;
pub mod norms;
pub mod spectral;

pub use error::{Error, Result};
