//! Fixed-point iteration on the time-discretized mild equations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::norms::{trapezoid_weights, BandTable, BesovSpec};
use crate::spectral::{ScalarField, VectorField};

use super::rhs::{heat_multiplier, raw_rhs};
use super::{MHDState, Trajectory};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub t_end: f64,
    pub n_times: usize,
    /// Time exponent of the working norm, `2 < q < ∞`.
    pub q: f64,
    /// Data indices `(s, p, r)`; iterates are measured in `L̃^q Ḃ^{s+2/q}_{p,r}`.
    pub spec: BesovSpec,
    pub tol: f64,
    pub max_iter: usize,
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidArgument(format!("Picard interval must be positive, got {}", self.t_end)));
        }
        if self.n_times < 2 {
            return Err(Error::InvalidArgument("Picard needs at least 2 time samples".into()));
        }
        if !(self.q > 2.0 && self.q.is_finite()) {
            return Err(Error::InvalidArgument(format!("Picard needs 2 < q < ∞, got {}", self.q)));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidArgument("Picard needs tol > 0 and max_iter ≥ 1".into()));
        }
        self.spec.validate()
    }

    pub fn working_spec(&self) -> BesovSpec {
        BesovSpec {
            s: self.spec.s + 2.0 / self.q,
            ..self.spec
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_times)
            .map(|i| self.t_end * i as f64 / (self.n_times - 1) as f64)
            .collect()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PicardReport {
    pub iterations: usize,
    /// `‖U^k - U^{k-1}‖` in the working norm.
    pub differences: Vec<f64>,
    /// `differences[k] / differences[k-1]`.
    pub factors: Vec<f64>,
    pub converged: bool,
    pub diverged: bool,
    /// Working norm of the free heat flow.
    pub heat_norm: f64,
    pub max_iterate_norm: f64,
}

type Samples = Vec<(VectorField, VectorField)>;

fn working_norm(samples: &Samples, times: &[f64], q: f64, spec: &BesovSpec, part: &DyadicPartition) -> Result<f64> {
    let refs: Vec<Vec<&ScalarField>> = samples
        .iter()
        .map(|(u, b)| u.components().iter().chain(b.components()).collect())
        .collect();
    BandTable::from_samples(&refs, times, spec.p, part)?.chemin_lerner(q, spec.s, spec.r)
}

fn diff(a: &Samples, b: &Samples) -> Samples {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.0.sub(&y.0).expect("grid"), x.1.sub(&y.1).expect("grid")))
        .collect()
}

fn heat_flow(u0: &VectorField, b0: &VectorField, times: &[f64]) -> Samples {
    times
        .iter()
        .map(|&t| {
            let m = heat_multiplier(u0.grid(), t);
            (u0.apply_multiplier(&m), b0.apply_multiplier(&m))
        })
        .collect()
}

fn tendencies(samples: &Samples) -> Samples {
    samples.par_iter().map(|(u, b)| raw_rhs(u, b)).collect()
}

/// `I_m = S(h)I_{m-1} + h/2 (S(h)F_{m-1} + F_m)` on a uniform mesh.
fn duhamel_recursive(heat: &Samples, f: &Samples, h: f64) -> Samples {
    let grid = heat[0].0.grid();
    let e = heat_multiplier(grid, h);
    let mut out = Vec::with_capacity(heat.len());
    let mut acc = (VectorField::zeros(grid), VectorField::zeros(grid));
    out.push(heat[0].clone());
    for m in 1..heat.len() {
        let u = acc.0.axpy(0.5 * h, &f[m - 1].0).unwrap().apply_multiplier(&e).axpy(0.5 * h, &f[m].0).unwrap();
        let b = acc.1.axpy(0.5 * h, &f[m - 1].1).unwrap().apply_multiplier(&e).axpy(0.5 * h, &f[m].1).unwrap();
        acc = (u, b);
        out.push((heat[m].0.add(&acc.0).unwrap(), heat[m].1.add(&acc.1).unwrap()));
    }
    out
}

/// Iterates `U^{k+1} = S(t)U_0 + ∫_0^t S(t-s) N(U^k(s)) ds` from `U^0 = S(t)U_0`.
///
/// Returns no trajectory when the iteration diverges (three consecutive
/// factors ≥ 1 or non-finite iterates) or runs out of iterations.
pub fn picard_solve(
    u0: &VectorField,
    b0: &VectorField,
    cfg: &PicardConfig,
    part: &DyadicPartition,
) -> Result<(Option<Trajectory>, PicardReport)> {
    cfg.validate()?;
    MHDState::new(u0.clone(), b0.clone(), 0.0)?;
    if !u0.grid().same_as(part.grid()) {
        return Err(Error::GridMismatch);
    }
    let times = cfg.times();
    let h = times[1] - times[0];
    let spec = cfg.working_spec();
    let heat = heat_flow(u0, b0, &times);
    let mut report = PicardReport {
        heat_norm: working_norm(&heat, &times, cfg.q, &spec, part)?,
        ..Default::default()
    };
    report.max_iterate_norm = report.heat_norm;
    let mut cur = heat.clone();
    let mut streak = 0;
    for k in 1..=cfg.max_iter {
        let next = duhamel_recursive(&heat, &tendencies(&cur), h);
        report.iterations = k;
        let finite = next
            .iter()
            .all(|(u, b)| u.l2_norm().is_finite() && b.l2_norm().is_finite());
        if !finite {
            report.diverged = true;
            return Ok((None, report));
        }
        let d = working_norm(&diff(&next, &cur), &times, cfg.q, &spec, part)?;
        let n = working_norm(&next, &times, cfg.q, &spec, part)?;
        report.max_iterate_norm = report.max_iterate_norm.max(n);
        if let Some(&prev) = report.differences.last() {
            let f = if prev > 0.0 { d / prev } else { 0.0 };
            report.factors.push(f);
            streak = if f >= 1.0 { streak + 1 } else { 0 };
        }
        report.differences.push(d);
        cur = next;
        if d < cfg.tol {
            report.converged = true;
            break;
        }
        if streak >= 3 {
            report.diverged = true;
            return Ok((None, report));
        }
    }
    if !report.converged {
        return Ok((None, report));
    }
    let states = cur
        .into_iter()
        .zip(&times)
        .map(|((u, b), &t)| MHDState::unchecked(u, b, t))
        .collect();
    Ok((Some(Trajectory::new(states)?), report))
}

/// Working-norm size of `U(t_m) - S(t_m)U_0 - Σ_i w_i S(t_m - t_i) N(U(t_i))`,
/// the trapezoid Duhamel sum evaluated directly for every sample.
pub fn mild_residual(traj: &Trajectory, q: f64, spec: &BesovSpec, part: &DyadicPartition) -> Result<f64> {
    spec.validate()?;
    let times = traj.times();
    let t0 = times[0];
    let rel: Vec<f64> = times.iter().map(|t| t - t0).collect();
    let states = traj.states();
    let f: Samples = states.par_iter().map(|s| raw_rhs(&s.u, &s.b)).collect();
    let u0 = &states[0];
    let grid = traj.grid();
    let residual: Samples = (0..states.len())
        .into_par_iter()
        .map(|m| {
            let e = heat_multiplier(grid, rel[m]);
            let mut u = states[m].u.sub(&u0.u.apply_multiplier(&e)).unwrap();
            let mut b = states[m].b.sub(&u0.b.apply_multiplier(&e)).unwrap();
            if m > 0 {
                let w = trapezoid_weights(&rel[..=m]);
                for i in 0..=m {
                    let ei = heat_multiplier(grid, rel[m] - rel[i]);
                    u = u.axpy(-w[i], &f[i].0.apply_multiplier(&ei)).unwrap();
                    b = b.axpy(-w[i], &f[i].1.apply_multiplier(&ei)).unwrap();
                }
            }
            (u, b)
        })
        .collect();
    working_norm(&residual, &rel, q, spec, part)
}
