//! Desk-scale runs of the existence, splitting, stability and trilinear statements.

mod calderon;
mod growth;
mod stability;
mod trilinear;
mod xnorm;

use crate::error::{Error, Result};
use crate::spectral::VectorField;

pub use calderon::{
    calderon_run, calderon_split, interpolate, mhd_like_rhs, solve_mhd_like, CalderonConfig, CalderonRun, SplitData,
};
pub use growth::{growth_monitor, GrowthReport, GrowthRow};
pub use stability::{
    gronwall_energy_check, gronwall_weight, weak_strong_check, weak_strong_gap, weak_surrogate, GronwallReport,
    WeakStrongReport,
};
pub use trilinear::{
    advection_integral, generate_triples, trilinear_bound_check, trilinear_form, trilinear_ratio, TrilinearBound,
    TrilinearIndices, TrilinearTriple, TripleDesign,
};
pub use xnorm::{heat_trajectory, x_norm, x_norm_heat_check, XNormReport};

/// Vector fields sampled at increasing times.
#[derive(Clone, Debug)]
pub struct FieldSeries {
    pub times: Vec<f64>,
    pub fields: Vec<VectorField>,
}

impl FieldSeries {
    pub fn new(times: Vec<f64>, fields: Vec<VectorField>) -> Result<Self> {
        if times.len() != fields.len() || times.is_empty() {
            return Err(Error::MeshMismatch(format!("{} times for {} fields", times.len(), fields.len())));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::MeshMismatch("times must increase".into()));
        }
        Ok(Self { times, fields })
    }
}
