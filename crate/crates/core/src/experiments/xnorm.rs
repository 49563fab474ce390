use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{calibrate_and_assert, index_map, Calibration, EstimateReport};
use crate::error::{Error, Result};
use crate::mhd::{heat_propagate_vector, MHDState, Trajectory};
use crate::norms::{lorentz_norm, time_lp_norm, trapezoid_weights, LorentzSpec};
use crate::spectral::{magnitude_lp_norm, VectorField};

/// The four pieces of the X(I) norm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct XNormReport {
    /// `sup_{t>0} t^{1/4} ‖(u, b)(t)‖₄`.
    pub x1: f64,
    /// `‖(u, b)‖_{L⁴(I; L⁴)}`.
    pub x2: f64,
    /// `‖∇(u, b)‖_{L²(I; L²)}`.
    pub x3: f64,
    /// `‖(u, b)‖_{L^{2r,2}(I; L^{2r/(r-1)})}`.
    pub x4: f64,
}

impl XNormReport {
    pub fn total(&self) -> f64 {
        self.x1 + self.x2 + self.x3 + self.x4
    }
}

fn pair_lp(s: &MHDState, p: f64) -> Result<f64> {
    magnitude_lp_norm(&s.components(), p)
}

pub fn x_norm(traj: &Trajectory, r: f64) -> Result<XNormReport> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("X norm needs 1 < r < ∞, got {r}")));
    }
    let times = traj.times();
    let t0 = times[0];
    let q4 = r * 2.0 / (r - 1.0);
    let rows = traj
        .states()
        .par_iter()
        .map(|s| Ok((pair_lp(s, 4.0)?, pair_lp(s, q4)?, s.dissipation().sqrt())))
        .collect::<Result<Vec<(f64, f64, f64)>>>()?;
    let l4: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let lq: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let grad: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let x1 = times
        .iter()
        .zip(&l4)
        .filter(|(t, _)| **t > t0)
        .map(|(t, v)| (t - t0).powf(0.25) * v)
        .fold(0.0, f64::max);
    Ok(XNormReport {
        x1,
        x2: time_lp_norm(&l4, &times, 4.0)?,
        x3: time_lp_norm(&grad, &times, 2.0)?,
        x4: lorentz_norm(&lq, &trapezoid_weights(&times), &LorentzSpec::new(2.0 * r, 2.0)?)?,
    })
}

/// Heat flow of `(v_0, g_0)` on a geometric mesh over `[0, T]` (with `t = 0`).
pub fn heat_trajectory(v0: &VectorField, g0: &VectorField, t_end: f64, n: usize) -> Result<Trajectory> {
    if !(t_end > 0.0) || n < 2 {
        return Err(Error::InvalidArgument("heat trajectory needs T > 0 and n ≥ 2".into()));
    }
    let lo = t_end * 1e-4;
    let mut times = vec![0.0];
    times.extend((0..n).map(|i| lo * (t_end / lo).powf(i as f64 / (n - 1) as f64)));
    let states = times
        .into_iter()
        .map(|t| {
            Ok(MHDState::unchecked(
                heat_propagate_vector(v0, t)?,
                heat_propagate_vector(g0, t)?,
                t,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(states)
}

/// `‖S(t)(v_0, g_0)‖_X / ‖(v_0, g_0)‖₂` calibrated on bank A and asserted on bank B.
pub fn x_norm_heat_check(
    bank_a: &[(VectorField, VectorField)],
    bank_b: &[(VectorField, VectorField)],
    r: f64,
    t_end: f64,
    cal: &Calibration,
) -> Result<EstimateReport> {
    let run = |bank: &[(VectorField, VectorField)]| -> Result<Vec<f64>> {
        bank.iter()
            .map(|(v, g)| {
                let n = (v.l2_norm_sq() + g.l2_norm_sq()).sqrt();
                let x = x_norm(&heat_trajectory(v, g, t_end, 48)?, r)?.total();
                Ok(if n > 0.0 { x / n } else { 0.0 })
            })
            .collect()
    };
    let (a, b) = (run(bank_a)?, run(bank_b)?);
    Ok(calibrate_and_assert("Theorem 4.1", index_map(&[("r", r), ("T", t_end)]), &a, &b, cal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, ScalarField};

    #[test]
    fn zero_and_single_mode() {
        let g = make_grid(2, 16).unwrap();
        let z = VectorField::zeros(&g);
        let traj = heat_trajectory(&z, &z, 1.0, 8).unwrap();
        assert_eq!(x_norm(&traj, 2.0).unwrap(), XNormReport::default());
        // u = (√2 sin y, 0): |u(t)| = √2 e^{-t}|sin y|, ‖∇u(t)‖₂ = e^{-t}.
        let u = VectorField::from_components(vec![
            ScalarField::from_fn(&g, |x| std::f64::consts::SQRT_2 * x[1].sin()).unwrap(),
            ScalarField::zeros(&g),
        ])
        .unwrap();
        let traj = heat_trajectory(&u, &z, 1.0, 400).unwrap();
        let x = x_norm(&traj, 2.0).unwrap();
        let x3 = ((1.0 - (-2.0f64).exp()) / 2.0).sqrt();
        assert!((x.x3 - x3).abs() < 1e-3 * x3, "{} {}", x.x3, x3);
        assert!(x.total() > 0.0 && x.x1 > 0.0 && x.x4 > 0.0);
    }
}
