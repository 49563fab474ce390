use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::mhd::{
    cfl_limit, ifrk4_step, integrate, pair_besov_norm, projected_divergence, MHDState, TensorTerm, Trajectory,
};
use crate::norms::BesovSpec;
use crate::spectral::{dealiased_physical, VectorField};

/// `(u_0, b_0) = (v_0 + w_0, g_0 + h_0)` with `(w_0, h_0)` the high-band tail.
#[derive(Clone, Debug)]
pub struct SplitData {
    pub v0: VectorField,
    pub g0: VectorField,
    pub w0: VectorField,
    pub h0: VectorField,
    /// Tail keeps bands `j ≥ cut`.
    pub cut: i32,
    pub tail_norm: f64,
}

/// Minimal `J` such that `(w_0, h_0) = (1 - S_J)(u_0, b_0)` has target norm ≤ `threshold`.
///
/// `J` runs from `j_min` (tail = data) to `j_max + 1`; the low part `S_J(u_0, b_0)` has
/// finitely many modes, so it has finite energy.
pub fn calderon_split(
    u0: &VectorField,
    b0: &VectorField,
    spec_bar: &BesovSpec,
    threshold: f64,
    part: &DyadicPartition,
) -> Result<SplitData> {
    MHDState::new(u0.clone(), b0.clone(), 0.0)?;
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be positive, got {threshold}")));
    }
    let scale = (u0.l2_norm_sq() + b0.l2_norm_sq()).sqrt();
    let mut last_tail = f64::INFINITY;
    for cut in part.j_min()..=part.j_max() + 1 {
        let low = part.low_pass(cut)?;
        let (v0, g0) = (u0.apply_multiplier(low), b0.apply_multiplier(low));
        let (w0, h0) = (u0.sub(&v0)?, b0.sub(&g0)?);
        // A tail at round-off level carries no band structure worth measuring.
        let tail = if (w0.l2_norm_sq() + h0.l2_norm_sq()).sqrt() <= 1e-13 * scale {
            0.0
        } else {
            pair_besov_norm(&w0, &h0, spec_bar, part)?
        };
        last_tail = tail;
        if tail <= threshold {
            return Ok(SplitData { v0, g0, w0, h0, cut, tail_norm: tail });
        }
    }
    Err(Error::ThresholdUnreachable { threshold, tail: last_tail })
}

type Pair = (VectorField, VectorField);

/// `(w, h)` at time `t`: the sample itself when `t` is a sample time, else cubic
/// Lagrange interpolation over the four nearest samples.
pub fn interpolate(traj: &Trajectory, t: f64) -> Result<Pair> {
    let times = traj.times();
    let (t0, t1) = (times[0], *times.last().expect("nonempty"));
    let slack = 1e-12 * t1.abs().max(1.0);
    if t < t0 - slack || t > t1 + slack {
        return Err(Error::MeshMismatch(format!("t = {t} outside [{t0}, {t1}]")));
    }
    let states = traj.states();
    if let Some(i) = times.iter().position(|&s| (s - t).abs() <= slack) {
        return Ok((states[i].u.clone(), states[i].b.clone()));
    }
    let n = times.len();
    if n < 4 {
        return Err(Error::MeshMismatch("interpolation needs at least 4 samples".into()));
    }
    let right = times.partition_point(|&s| s < t);
    let start = right.saturating_sub(2).min(n - 4);
    let nodes = &times[start..start + 4];
    let mut u = VectorField::zeros(traj.grid());
    let mut b = VectorField::zeros(traj.grid());
    for (k, &tk) in nodes.iter().enumerate() {
        let w: f64 = nodes
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .map(|(_, &tm)| (t - tm) / (tk - tm))
            .product();
        u = u.axpy(w, &states[start + k].u)?;
        b = b.axpy(w, &states[start + k].b)?;
    }
    Ok((u, b))
}

fn phys(v: &VectorField) -> Vec<Vec<f64>> {
    v.components().iter().map(dealiased_physical).collect()
}

/// Tendencies of the system for `(v, g)` with `(w, h)` as known coefficients.
pub fn mhd_like_rhs(v: &VectorField, g: &VectorField, w: &VectorField, h: &VectorField) -> Result<Pair> {
    let grid = v.grid();
    let (pv, pg, pw, ph) = (phys(v), phys(g), phys(w), phys(h));
    let t = |coef: f64, a, c| TensorTerm { coef, a, c };
    let dv = projected_divergence(
        grid,
        &[
            t(-1.0, &pv, &pv),
            t(-1.0, &pv, &pw),
            t(-1.0, &pw, &pv),
            t(1.0, &pg, &pg),
            t(1.0, &pg, &ph),
            t(1.0, &ph, &pg),
        ],
    )?;
    let dg = projected_divergence(
        grid,
        &[
            t(-1.0, &pv, &pg),
            t(-1.0, &pv, &ph),
            t(-1.0, &pw, &pg),
            t(1.0, &pg, &pv),
            t(1.0, &ph, &pv),
            t(1.0, &pg, &pw),
        ],
    )?;
    Ok((dv, dg))
}

/// Marches `(v, g)` on `[0, n_steps·dt]` with IF-RK4, sampling every `sample_every` steps.
pub fn solve_mhd_like(
    v0: &VectorField,
    g0: &VectorField,
    wh: &Trajectory,
    dt: f64,
    n_steps: usize,
    sample_every: usize,
) -> Result<Trajectory> {
    let start = MHDState::new(v0.clone(), g0.clone(), wh.first().t)?;
    if !wh.grid().same_as(start.grid()) {
        return Err(Error::GridMismatch);
    }
    let t_end = start.t + n_steps as f64 * dt;
    if t_end > wh.last().t * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::MeshMismatch(format!("(w, h) ends at {} before {t_end}", wh.last().t)));
    }
    let every = sample_every.max(1);
    let mut states = vec![start.clone()];
    let mut cur = start.clone();
    for k in 1..=n_steps {
        let (w, h) = interpolate(wh, cur.t)?;
        let total = MHDState::unchecked(cur.u.add(&w)?, cur.b.add(&h)?, cur.t);
        let limit = cfl_limit(&total);
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit });
        }
        let (u, b) = ifrk4_step(&cur.u, &cur.b, cur.t, dt, |v, g, s| {
            let (w, h) = interpolate(wh, s)?;
            mhd_like_rhs(v, g, &w, &h)
        })?;
        let next = MHDState::unchecked(u, b, start.t + k as f64 * dt);
        if !next.is_finite() {
            return Err(Error::NonFinite(format!("(v, g) after step from t = {}", cur.t)));
        }
        cur = next;
        if k % every == 0 || k == n_steps {
            states.push(cur.clone());
        }
    }
    Trajectory::new(states)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalderonConfig {
    pub spec_bar: BesovSpec,
    pub threshold: f64,
    pub dt: f64,
    pub n_steps: usize,
    /// Samples kept in the returned trajectories.
    pub sample_every: usize,
}

#[derive(Clone, Debug)]
pub struct CalderonRun {
    pub split: SplitData,
    /// Full MHD solution from `(w_0, h_0)`.
    pub wh: Trajectory,
    pub vg: Trajectory,
    /// `(v + w, g + h)`.
    pub sum: Trajectory,
}

fn subsample(traj: Trajectory, every: usize) -> Result<Trajectory> {
    let n = traj.len();
    let states = traj
        .into_states()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| i % every == 0 || *i == n - 1)
        .map(|(_, s)| s)
        .collect();
    Trajectory::new(states)
}

/// Split, solve `(w, h)` by MHD and `(v, g)` by the coupled system, recombine.
pub fn calderon_run(u0: &VectorField, b0: &VectorField, cfg: &CalderonConfig, part: &DyadicPartition) -> Result<CalderonRun> {
    let split = calderon_split(u0, b0, &cfg.spec_bar, cfg.threshold, part)?;
    let wh_fine = integrate(&MHDState::unchecked(split.w0.clone(), split.h0.clone(), 0.0), cfg.dt, cfg.n_steps, 1)?;
    let vg_fine = solve_mhd_like(&split.v0, &split.g0, &wh_fine, cfg.dt, cfg.n_steps, 1)?;
    let every = cfg.sample_every.max(1);
    let vg = subsample(vg_fine, every)?;
    let wh = subsample(wh_fine, every)?;
    let sum = Trajectory::new(
        vg.states()
            .iter()
            .zip(wh.states())
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok(CalderonRun { split, wh, vg, sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::default_partition;
    use crate::spectral::{make_grid, random_solenoidal, ScalarField, SpectrumShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shear(g: &crate::spectral::Grid, k: f64) -> VectorField {
        VectorField::from_components(vec![
            ScalarField::from_fn(g, |x| (k * x[1]).sin()).unwrap(),
            ScalarField::zeros(g),
        ])
        .unwrap()
    }

    #[test]
    fn split_examples() {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let spec = BesovSpec::new(-0.5, 4.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (lo, hi) = part.covered_annulus();
        let u0 = random_solenoidal(&g, &mut rng, SpectrumShape::new(lo, hi, 0.0));
        let b0 = random_solenoidal(&g, &mut rng, SpectrumShape::new(lo, hi, 0.0));
        let s = calderon_split(&u0, &b0, &spec, 0.5, &part).unwrap();
        assert!(s.tail_norm <= 0.5);
        assert!(s.v0.add(&s.w0).unwrap().sub(&u0).unwrap().l2_norm() < 1e-15);
        assert!(s.g0.add(&s.h0).unwrap().sub(&b0).unwrap().l2_norm() < 1e-15);
        // Already small: everything goes to the tail.
        let big = pair_besov_norm(&u0, &b0, &spec, &part).unwrap();
        let all = calderon_split(&u0, &b0, &spec, 2.0 * big, &part).unwrap();
        assert_eq!(all.v0.l2_norm() + all.g0.l2_norm(), 0.0);
        // A single low mode lives entirely in the finite-energy part.
        let m = shear(&g, 1.0);
        let z = VectorField::zeros(&g);
        let low = calderon_split(&m, &z, &spec, 1e-9, &part).unwrap();
        assert!(low.tail_norm == 0.0 && low.w0.l2_norm() < 1e-15);
        // Content past the covered annulus keeps the top tail nonempty.
        let rough = random_solenoidal(&g, &mut rng, SpectrumShape::new(1.0, 10.0, 0.0));
        assert!(matches!(
            calderon_split(&rough, &z, &spec, 1e-300, &part),
            Err(Error::ThresholdUnreachable { .. })
        ));
    }

    #[test]
    fn zero_coefficients_reduce_to_mhd() {
        let g = make_grid(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let sh = SpectrumShape::new(1.0, 4.0, 0.0);
        let v0 = random_solenoidal(&g, &mut rng, sh).scale(0.3);
        let g0 = random_solenoidal(&g, &mut rng, sh).scale(0.3);
        let zero = Trajectory::new(
            (0..=10).map(|k| MHDState::unchecked(VectorField::zeros(&g), VectorField::zeros(&g), 0.01 * k as f64)).collect(),
        )
        .unwrap();
        let like = solve_mhd_like(&v0, &g0, &zero, 0.01, 10, 10).unwrap();
        let mhd = integrate(&MHDState::new(v0, g0, 0.0).unwrap(), 0.01, 10, 10).unwrap();
        let d = like.last().sub(mhd.last()).unwrap();
        assert!(d.l2_norm() < 1e-10 * mhd.last().l2_norm());
    }

    #[test]
    fn zero_v_stays_zero() {
        let g = make_grid(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sh = SpectrumShape::new(1.0, 4.0, 0.0);
        let w0 = random_solenoidal(&g, &mut rng, sh).scale(0.3);
        let h0 = random_solenoidal(&g, &mut rng, sh).scale(0.3);
        let wh = integrate(&MHDState::new(w0, h0, 0.0).unwrap(), 0.01, 10, 1).unwrap();
        let z = VectorField::zeros(&g);
        let vg = solve_mhd_like(&z, &z, &wh, 0.01, 10, 1).unwrap();
        assert_eq!(vg.last().energy(), 0.0);
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let g = make_grid(2, 16).unwrap();
        let base = shear(&g, 1.0);
        let states = (0..6)
            .map(|k| {
                let t = 0.1 * k as f64;
                MHDState::unchecked(base.scale(t * t * t - t), base.scale(2.0), t)
            })
            .collect();
        let traj = Trajectory::new(states).unwrap();
        let (u, _) = interpolate(&traj, 0.23).unwrap();
        let t: f64 = 0.23;
        assert!(u.sub(&base.scale(t.powi(3) - t)).unwrap().l2_norm() < 1e-14);
        assert!(interpolate(&traj, 0.7).is_err());
    }
}
