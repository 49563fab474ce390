use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{calibrate_and_assert, index_map, Calibration, EstimateReport};
use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::norms::{cumulative_integral, lorentz_norm, trapezoid_weights, BesovSpec, LorentzSpec};
use crate::spectral::{gradient, lp_norm, magnitude_lp_norm, partial, ScalarField, VectorField};

use super::rhs::heat_multiplier;
use super::{pair_besov_norm, MHDState, Trajectory};

#[derive(Clone, Debug, Serialize)]
pub struct EnergyReport {
    pub dim: usize,
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    /// `2∫_0^t ‖(∇u, ∇b)‖₂²`, fourth-order quadrature on the samples.
    pub dissipated: Vec<f64>,
    /// `(E(t) + dissipated(t) - E(0)) / E(0)`.
    pub drift: Vec<f64>,
    pub max_abs_drift: f64,
    pub max_drift: f64,
}

impl EnergyReport {
    /// Equality up to `tol` (relative).
    pub fn equality_holds(&self, tol: f64) -> bool {
        self.max_abs_drift <= tol
    }

    /// Dissipation-signed inequality up to `tol`.
    pub fn inequality_holds(&self, tol: f64) -> bool {
        self.max_drift <= tol
    }
}

pub fn energy_balance(traj: &Trajectory) -> EnergyReport {
    let times = traj.times();
    let energy = traj.energies();
    let rate: Vec<f64> = traj.states().iter().map(MHDState::dissipation).collect();
    let dissipated: Vec<f64> = cumulative_integral(&rate, &times).iter().map(|d| 2.0 * d).collect();
    let e0 = energy[0];
    let drift: Vec<f64> = energy
        .iter()
        .zip(&dissipated)
        .map(|(e, d)| if e0 > 0.0 { (e + d - e0) / e0 } else { e + d })
        .collect();
    EnergyReport {
        dim: traj.grid().dim(),
        max_abs_drift: drift.iter().fold(0.0, |m: f64, d| m.max(d.abs())),
        max_drift: drift.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        times,
        energy,
        dissipated,
        drift,
    }
}

/// `∫ ((a·∇)b)·c dx` by exact quadrature of the (unaliased) triple product.
pub(crate) fn advective_triple(a: &VectorField, b: &VectorField, c: &VectorField) -> f64 {
    let dim = a.dim();
    let pa = a.to_physical();
    let pc = c.to_physical();
    let len = a.grid().len();
    let mut sum = 0.0;
    for i in 0..dim {
        let grads: Vec<Vec<f64>> = (0..dim).map(|j| partial(b.component(i), j).to_physical()).collect();
        for x in 0..len {
            let adv: f64 = (0..dim).map(|j| pa[j][x] * grads[j][x]).sum();
            sum += adv * pc[i][x];
        }
    }
    sum / len as f64
}

/// `|((b·∇)b, u) + ((b·∇)u, b)|`, relative to `max(1, |first| + |second|)`.
pub fn magnetic_cancellation(state: &MHDState) -> f64 {
    let first = advective_triple(&state.b, &state.b, &state.u);
    let second = advective_triple(&state.b, &state.u, &state.b);
    (first + second).abs() / (first.abs() + second.abs()).max(1.0)
}

/// Measured per-band heat decay constants `-ln(‖Δ_j f(t)‖_p / ‖Δ_j f_0‖_p) / (4^j t)`.
#[derive(Clone, Debug, Serialize)]
pub struct BandRate {
    pub j: i32,
    pub c_min: f64,
    pub c_max: f64,
}

/// Bands whose initial norm is below this fraction of the largest are skipped.
const BAND_FLOOR: f64 = 1e-10;

pub fn band_decay_rates(f0: &ScalarField, times: &[f64], p: f64, part: &DyadicPartition) -> Result<Vec<BandRate>> {
    f0.require_mean_free(1e-12)?;
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidArgument("decay times must be finite and ≥ 0".into()));
    }
    let bands: Vec<(i32, ScalarField)> = part
        .bands()
        .map(|j| Ok((j.0, f0.apply_multiplier(part.phi(j)?))))
        .collect::<Result<_>>()?;
    let norms0: Vec<f64> = bands.iter().map(|(_, b)| lp_norm(b, p)).collect::<Result<_>>()?;
    let top = norms0.iter().cloned().fold(0.0, f64::max);
    bands
        .par_iter()
        .zip(&norms0)
        .filter(|(_, &n0)| n0 > BAND_FLOOR * top && n0 > 0.0)
        .map(|((j, band), &n0)| {
            let scale = 4f64.powi(*j);
            let mut c_min = f64::INFINITY;
            let mut c_max: f64 = 0.0;
            for &t in times.iter().filter(|&&t| t > 0.0) {
                let nt = lp_norm(&band.apply_multiplier(&heat_multiplier(band.grid(), t)), p)?;
                let c = -(nt / n0).ln() / (scale * t);
                c_min = c_min.min(c);
                c_max = c_max.max(c);
            }
            Ok(BandRate { j: *j, c_min, c_max })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BandDecayReport {
    pub estimate: EstimateReport,
    /// Largest decay constant consistent with the calibrated bound.
    pub c_calibrated: f64,
    /// Smallest measured constant per band over bank B.
    pub per_band_c: Vec<(i32, f64)>,
}

fn inverse_rate(f: &ScalarField, times: &[f64], p: f64, part: &DyadicPartition) -> Result<(f64, Vec<BandRate>)> {
    let rates = band_decay_rates(f, times, p, part)?;
    let c = rates.iter().map(|r| r.c_min).fold(f64::INFINITY, f64::min);
    Ok((if c.is_finite() && c > 0.0 { 1.0 / c } else if rates.is_empty() { 0.0 } else { f64::INFINITY }, rates))
}

/// `‖Δ_j S(t) f‖_p ≤ e^{-c 4^j t} ‖Δ_j f‖_p`: the ratio `1/c` is calibrated on
/// bank A and asserted on bank B.
pub fn band_decay_check(
    bank_a: &[ScalarField],
    bank_b: &[ScalarField],
    times: &[f64],
    p: f64,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<BandDecayReport> {
    let run = |bank: &[ScalarField]| -> Result<Vec<(f64, Vec<BandRate>)>> {
        bank.par_iter().map(|f| inverse_rate(f, times, p, part)).collect()
    };
    let a = run(bank_a)?;
    let b = run(bank_b)?;
    let ra: Vec<f64> = a.iter().map(|x| x.0).collect();
    let rb: Vec<f64> = b.iter().map(|x| x.0).collect();
    let estimate = calibrate_and_assert("Lemma 3.1", index_map(&[("p", p)]), &ra, &rb, cal);
    let mut per_band: Vec<(i32, f64)> = part.bands().map(|j| (j.0, f64::INFINITY)).collect();
    for rate in b.iter().flat_map(|x| &x.1) {
        let slot = &mut per_band[(rate.j - part.j_min()) as usize];
        slot.1 = slot.1.min(rate.c_min);
    }
    per_band.retain(|x| x.1.is_finite());
    Ok(BandDecayReport {
        c_calibrated: if estimate.calibration_constant > 0.0 { 1.0 / estimate.calibration_constant } else { f64::INFINITY },
        estimate,
        per_band_c: per_band,
    })
}

fn grad_components(v: &VectorField) -> Vec<ScalarField> {
    v.components().iter().flat_map(|c| gradient(c).into_components()).collect()
}

/// `sup_t t^{1/2 - n/(2p) + α/2} ‖∇^α(u, b)(t)‖_p / ‖(u_0, b_0)‖_{Ḃ^{n/p-1}_{p,r}}` over samples with `t > 0`.
pub fn weighted_decay_ratio(traj: &Trajectory, p: f64, r: f64, alpha: u32, part: &DyadicPartition) -> Result<f64> {
    let n = traj.grid().dim() as f64;
    if !(p > n) || p.is_infinite() {
        return Err(Error::Hypothesis {
            lemma: "Remark 3.2",
            detail: format!("needs n < p < ∞, got p = {p}"),
        });
    }
    if alpha > 1 {
        return Err(Error::InvalidArgument(format!("alpha must be 0 or 1, got {alpha}")));
    }
    let first = traj.first();
    let data = pair_besov_norm(&first.u, &first.b, &BesovSpec::new(n / p - 1.0, p, r)?, part)?;
    let expo = 0.5 - n / (2.0 * p) + alpha as f64 / 2.0;
    let sup = traj
        .states()
        .par_iter()
        .filter(|s| s.t > first.t)
        .map(|s| {
            let comps: Vec<ScalarField> = if alpha == 0 {
                s.components().into_iter().cloned().collect()
            } else {
                grad_components(&s.u).into_iter().chain(grad_components(&s.b)).collect()
            };
            let refs: Vec<&ScalarField> = comps.iter().collect();
            Ok((s.t - first.t).powf(expo) * magnitude_lp_norm(&refs, p)?)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(if data > 0.0 { sup / data } else if sup == 0.0 { 0.0 } else { f64::INFINITY })
}

pub fn weighted_decay_check(
    bank_a: &[Trajectory],
    bank_b: &[Trajectory],
    p: f64,
    r: f64,
    alpha: u32,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<EstimateReport> {
    let run = |bank: &[Trajectory]| -> Result<Vec<f64>> {
        bank.iter().map(|t| weighted_decay_ratio(t, p, r, alpha, part)).collect()
    };
    let (a, b) = (run(bank_a)?, run(bank_b)?);
    Ok(calibrate_and_assert(
        "Remark 3.2",
        index_map(&[("p", p), ("r", r), ("alpha", alpha as f64)]),
        &a,
        &b,
        cal,
    ))
}

/// Geometric mesh `T·10^{-4} … T` with `t = 0` prepended.
fn geometric_mesh(t_end: f64, n: usize) -> Vec<f64> {
    let lo = t_end * 1e-4;
    let mut out = vec![0.0];
    out.extend((0..n).map(|i| lo * (t_end / lo).powf(i as f64 / (n - 1) as f64)));
    out
}

/// `‖S(t)u_0‖_{L^{p,2}_t(0,T; L^q_x)} / ‖u_0‖₂` with `2/p + n/q = n/2`.
pub fn heat_lorentz_ratio(u0: &ScalarField, p: f64, q: f64, t_end: f64) -> Result<f64> {
    let n = u0.grid().dim() as f64;
    if !(p > 1.0 && q >= 1.0) || (2.0 / p + n / q - n / 2.0).abs() > 1e-12 {
        return Err(Error::Hypothesis {
            lemma: "Prop. 2.2",
            detail: format!("needs 2/p + n/q = n/2, got p = {p}, q = {q}, n = {n}"),
        });
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument("T must be positive".into()));
    }
    u0.require_mean_free(1e-12)?;
    let norm = u0.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let times = geometric_mesh(t_end, 64);
    let vals: Vec<f64> = times
        .par_iter()
        .map(|&t| lp_norm(&u0.apply_multiplier(&heat_multiplier(u0.grid(), t)), q))
        .collect::<Result<_>>()?;
    let w = trapezoid_weights(&times);
    Ok(lorentz_norm(&vals, &w, &LorentzSpec::new(p, 2.0)?)? / norm)
}

pub fn heat_lorentz_check(
    bank_a: &[ScalarField],
    bank_b: &[ScalarField],
    p: f64,
    q: f64,
    t_end: f64,
    cal: &Calibration,
) -> Result<EstimateReport> {
    let run = |bank: &[ScalarField]| -> Result<Vec<f64>> {
        bank.par_iter().map(|f| heat_lorentz_ratio(f, p, q, t_end)).collect()
    };
    let (a, b) = (run(bank_a)?, run(bank_b)?);
    Ok(calibrate_and_assert("Prop. 2.2", index_map(&[("p", p), ("q", q)]), &a, &b, cal))
}
