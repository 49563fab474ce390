//! Besov, Chemin–Lerner and Lorentz norms, and Monte-Carlo checks of the Lorentz-space inequalities.

mod besov;
pub(crate) use besov::besov_norm_components;
pub mod inequalities;
mod lorentz;
mod mixed;

pub use besov::{band_lp_norms, besov_norm, besov_norm_vector, besov_profile, inhomog_besov_norm, lr_sum, BesovSpec};
pub use lorentz::{lorentz_norm, lorentz_norm_uniform, LorentzSpec};
pub use mixed::{
    chemin_lerner_norm, chemin_lerner_norm_vector, cumulative_integral, iterated_norm, time_lp_norm, trapezoid_weights, BandTable,
    MixedNormSpec,
};

use serde::Serialize;

/// One CSV row: `norm_name,s,p,r,rho,value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormRecord {
    pub norm_name: String,
    pub s: f64,
    pub p: f64,
    pub r: f64,
    pub rho: Option<f64>,
    pub value: f64,
}

impl NormRecord {
    pub const CSV_HEADER: &'static str = "norm_name,s,p,r,rho,value";

    pub fn to_csv_row(&self) -> String {
        let rho = self.rho.map(|v| v.to_string()).unwrap_or_default();
        format!("{},{},{},{},{},{}", self.norm_name, self.s, self.p, self.r, rho, self.value)
    }
}
