//! Incompressible MHD with unit viscosity and resistivity on the torus.
//!
//! Pressure is removed by the Leray projection, so the system reads
//! `u_t - Δu = -P∇·(u⊗u) + P∇·(b⊗b)`, `b_t - Δb = -P∇·(u⊗b) + P∇·(b⊗u)`.

mod monitors;
mod picard;
mod rhs;
mod stepper;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::norms::{BandTable, BesovSpec};
use crate::spectral::{divergence_max, Grid, ScalarField, VectorField};

pub(crate) use monitors::advective_triple;
pub use monitors::{
    band_decay_check, band_decay_rates, energy_balance, heat_lorentz_check, heat_lorentz_ratio, magnetic_cancellation,
    weighted_decay_check, weighted_decay_ratio, BandDecayReport, BandRate, EnergyReport,
};
pub use picard::{mild_residual, picard_solve, PicardConfig, PicardReport};
pub use rhs::{heat_multiplier, heat_propagate, heat_propagate_vector, nonlinear_rhs, projected_divergence, TensorTerm};
pub use stepper::{cfl_limit, ifrk4_step, integrate, step_ifrk4};

/// Relative tolerance for the divergence and mean-free invariants.
pub const INVARIANT_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct MHDState {
    pub u: VectorField,
    pub b: VectorField,
    pub t: f64,
}

impl MHDState {
    pub fn new(u: VectorField, b: VectorField, t: f64) -> Result<Self> {
        let s = Self { u, b, t };
        s.validate()?;
        Ok(s)
    }

    /// State built without checking the invariants.
    pub fn unchecked(u: VectorField, b: VectorField, t: f64) -> Self {
        Self { u, b, t }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::unchecked(VectorField::zeros(grid), VectorField::zeros(grid), 0.0)
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.u.grid().same_as(self.b.grid()) || self.u.dim() != self.b.dim() {
            return Err(Error::GridMismatch);
        }
        if !self.t.is_finite() {
            return Err(Error::NonFinite("state time".into()));
        }
        let scale = self.l2_norm();
        if !scale.is_finite() {
            return Err(Error::NonFinite("state".into()));
        }
        let div = divergence_max(&self.u).max(divergence_max(&self.b));
        if div > INVARIANT_TOL * scale.max(f64::MIN_POSITIVE) && div > 0.0 {
            return Err(Error::Divergence(div / scale.max(f64::MIN_POSITIVE)));
        }
        let mean = self.u.max_abs_mean().max(self.b.max_abs_mean());
        if mean > INVARIANT_TOL * scale.max(f64::MIN_POSITIVE) && mean > 0.0 {
            return Err(Error::NotMeanFree(mean));
        }
        Ok(())
    }

    /// `‖u‖₂² + ‖b‖₂²`.
    pub fn energy(&self) -> f64 {
        self.u.l2_norm_sq() + self.b.l2_norm_sq()
    }

    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// `‖∇u‖₂² + ‖∇b‖₂²`, exact in Fourier space.
    pub fn dissipation(&self) -> f64 {
        let k2 = self.grid().k_squared();
        self.u
            .components()
            .iter()
            .chain(self.b.components())
            .map(|c| c.coeffs().iter().zip(k2).map(|(z, k)| k * z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Components of `u` followed by those of `b`.
    pub fn components(&self) -> Vec<&ScalarField> {
        self.u.components().iter().chain(self.b.components()).collect()
    }

    pub fn add(&self, other: &MHDState) -> Result<MHDState> {
        Ok(Self::unchecked(self.u.add(&other.u)?, self.b.add(&other.b)?, self.t))
    }

    pub fn sub(&self, other: &MHDState) -> Result<MHDState> {
        Ok(Self::unchecked(self.u.sub(&other.u)?, self.b.sub(&other.b)?, self.t))
    }

    pub fn scale(&self, s: f64) -> MHDState {
        Self::unchecked(self.u.scale(s), self.b.scale(s), self.t)
    }

    pub fn resample(&self, target: &Grid) -> Result<MHDState> {
        Ok(Self::unchecked(self.u.resample(target)?, self.b.resample(target)?, self.t))
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.components()
            .iter()
            .all(|c| c.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

/// Time-ordered states on one grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    states: Vec<MHDState>,
}

impl Trajectory {
    pub fn new(states: Vec<MHDState>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::InvalidArgument("empty trajectory".into()));
        };
        for s in &states {
            if !s.grid().same_as(first.grid()) || s.u.dim() != first.u.dim() {
                return Err(Error::GridMismatch);
            }
        }
        if states.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::MeshMismatch("trajectory times must be strictly increasing".into()));
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[MHDState] {
        &self.states
    }

    pub fn into_states(self) -> Vec<MHDState> {
        self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &MHDState {
        &self.states[0]
    }

    pub fn last(&self) -> &MHDState {
        self.states.last().expect("nonempty")
    }

    pub fn grid(&self) -> &Grid {
        self.first().grid()
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    /// Per-band ledger `‖Δ_j(u, b)(t_i)‖_p` of every sample.
    pub fn band_ledger(&self, p: f64, part: &DyadicPartition) -> Result<BandTable> {
        let samples: Vec<Vec<&ScalarField>> = self.states.iter().map(|s| s.components()).collect();
        BandTable::from_samples(&samples, &self.times(), p, part)
    }

    /// `‖(u, b)‖_{L̃^ρ(I; Ḃ^s_{p,r})}` over the sampled interval.
    pub fn chemin_lerner(&self, rho: f64, spec: &BesovSpec, part: &DyadicPartition) -> Result<f64> {
        spec.validate()?;
        self.band_ledger(spec.p, part)?.chemin_lerner(rho, spec.s, spec.r)
    }

    /// Weighted ledger rows `2^{js}‖Δ_j(u, b)(t_i)‖_p`.
    pub fn weighted_ledger(&self, spec: &BesovSpec, part: &DyadicPartition) -> Result<Vec<Vec<f64>>> {
        let t = self.band_ledger(spec.p, part)?;
        Ok(t.values
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(b, a)| 2f64.powf((t.j_min + b as i32) as f64 * spec.s) * a)
                    .collect()
            })
            .collect())
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(MHDState::energy).collect()
    }
}

/// Per-sample numbers that go into run summaries.
#[derive(Clone, Debug, Serialize)]
pub struct TrajectorySummary {
    pub n_samples: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub energy_start: f64,
    pub energy_end: f64,
    pub max_divergence: f64,
}

impl Trajectory {
    pub fn summary(&self) -> TrajectorySummary {
        TrajectorySummary {
            n_samples: self.len(),
            t_start: self.first().t,
            t_end: self.last().t,
            energy_start: self.first().energy(),
            energy_end: self.last().energy(),
            max_divergence: self
                .states
                .iter()
                .map(|s| divergence_max(&s.u).max(divergence_max(&s.b)))
                .fold(0.0, f64::max),
        }
    }
}

/// Besov norm of the pair `(u, b)` measured jointly.
pub fn pair_besov_norm(u: &VectorField, b: &VectorField, spec: &BesovSpec, part: &DyadicPartition) -> Result<f64> {
    let comps: Vec<&ScalarField> = u.components().iter().chain(b.components()).collect();
    crate::norms::besov_norm_components(&comps, spec, part)
}
