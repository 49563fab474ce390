//! Integrating-factor RK4 in Lawson form: the heat part is exact, RK4 acts on
//! the nonlinear term in the heat-rotated frame.

use crate::error::{Error, Result};
use crate::spectral::{leray_project, VectorField};

use super::rhs::{heat_multiplier, raw_rhs};
use super::{MHDState, Trajectory};

/// Advective safety factor.
pub const CFL_SAFETY: f64 = 0.5;

fn max_magnitude(v: &VectorField) -> f64 {
    let phys = v.to_physical();
    (0..v.grid().len())
        .map(|i| phys.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// `0.5 · (2π/N) / (max|u| + max|b|)`; infinite for a state at rest.
pub fn cfl_limit(state: &MHDState) -> f64 {
    let speed = max_magnitude(&state.u) + max_magnitude(&state.b);
    let dx = state.grid().period() / state.grid().n() as f64;
    if speed == 0.0 {
        f64::INFINITY
    } else {
        CFL_SAFETY * dx / speed
    }
}

type Pair = (VectorField, VectorField);

fn lin(terms: &[(f64, &Pair)]) -> Pair {
    let (c0, p0) = terms[0];
    let mut u = p0.0.scale(c0);
    let mut b = p0.1.scale(c0);
    for &(c, p) in &terms[1..] {
        u = u.axpy(c, &p.0).expect("shared grid");
        b = b.axpy(c, &p.1).expect("shared grid");
    }
    (u, b)
}

fn mult(m: &[f64], p: &Pair) -> Pair {
    (p.0.apply_multiplier(m), p.1.apply_multiplier(m))
}

/// One Lawson step for `U' = ΔU + N(t, U)`; `rhs` returns `N`.
pub fn ifrk4_step(
    u: &VectorField,
    b: &VectorField,
    t: f64,
    dt: f64,
    rhs: impl Fn(&VectorField, &VectorField, f64) -> Result<Pair>,
) -> Result<Pair> {
    let grid = u.grid();
    let e1 = heat_multiplier(grid, 0.5 * dt);
    let e2 = heat_multiplier(grid, dt);
    let x = (u.clone(), b.clone());
    let n = |p: &Pair, s: f64| -> Result<Pair> {
        let r = rhs(&p.0, &p.1, s)?;
        Ok((r.0.scale(dt), r.1.scale(dt)))
    };
    let ka = n(&x, t)?;
    let kb = n(&mult(&e1, &lin(&[(1.0, &x), (0.5, &ka)])), t + 0.5 * dt)?;
    let kc = n(&lin(&[(1.0, &mult(&e1, &x)), (0.5, &kb)]), t + 0.5 * dt)?;
    let kd = n(&lin(&[(1.0, &mult(&e2, &x)), (1.0, &mult(&e1, &kc))]), t + dt)?;
    let mid = mult(&e1, &lin(&[(2.0, &kb), (2.0, &kc)]));
    let out = lin(&[
        (1.0, &mult(&e2, &x)),
        (1.0 / 6.0, &mult(&e2, &ka)),
        (1.0 / 6.0, &mid),
        (1.0 / 6.0, &kd),
    ]);
    Ok((leray_project(&out.0), leray_project(&out.1)))
}

pub(crate) fn checked_step(
    state: &MHDState,
    dt: f64,
    limit: f64,
    rhs: impl Fn(&VectorField, &VectorField, f64) -> Result<Pair>,
) -> Result<MHDState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, limit });
    }
    let (u, b) = ifrk4_step(&state.u, &state.b, state.t, dt, rhs)?;
    let next = MHDState::unchecked(u, b, state.t + dt);
    if !next.is_finite() {
        return Err(Error::NonFinite(format!("state after step from t = {}", state.t)));
    }
    Ok(next)
}

/// One IF-RK4 step of the MHD system; `dt` must respect [`cfl_limit`].
pub fn step_ifrk4(state: &MHDState, dt: f64) -> Result<MHDState> {
    state.validate()?;
    checked_step(state, dt, cfl_limit(state), |u, b, _| Ok(raw_rhs(u, b)))
}

/// `n_steps` steps, keeping the initial state and every `sample_every`-th one.
pub fn integrate(state: &MHDState, dt: f64, n_steps: usize, sample_every: usize) -> Result<Trajectory> {
    state.validate()?;
    let every = sample_every.max(1);
    let mut states = vec![state.clone()];
    let mut cur = state.clone();
    for k in 1..=n_steps {
        let mut next = checked_step(&cur, dt, cfl_limit(&cur), |u, b, _| Ok(raw_rhs(u, b)))?;
        next.t = state.t + k as f64 * dt;
        cur = next;
        if k % every == 0 || k == n_steps {
            states.push(cur.clone());
        }
    }
    Trajectory::new(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, ScalarField};

    fn shear(g: &crate::spectral::Grid, amp: f64, k: f64) -> VectorField {
        VectorField::from_components(vec![
            ScalarField::from_fn(g, |x| amp * (k * x[1]).sin()).unwrap(),
            ScalarField::zeros(g),
        ])
        .unwrap()
    }

    #[test]
    fn linear_regime_is_heat_decay() {
        let g = make_grid(2, 16).unwrap();
        let u = shear(&g, 1e-8, 2.0);
        let s = MHDState::new(u.clone(), u.clone(), 0.0).unwrap();
        let traj = integrate(&s, 0.01, 20, 5).unwrap();
        let expect = u.scale((-4.0 * 0.2f64).exp());
        assert!(traj.last().u.sub(&expect).unwrap().l2_norm() < 1e-10 * 1e-8);
        assert_eq!(traj.len(), 5);
        assert!((traj.last().t - 0.2).abs() < 1e-15);
    }

    #[test]
    fn cfl_is_enforced() {
        let g = make_grid(2, 16).unwrap();
        let s = MHDState::new(shear(&g, 10.0, 1.0), VectorField::zeros(&g), 0.0).unwrap();
        let lim = cfl_limit(&s);
        assert!((lim - 0.5 * (std::f64::consts::TAU / 16.0) / 10.0).abs() < 1e-12);
        assert!(matches!(step_ifrk4(&s, 2.0 * lim), Err(Error::Cfl { .. })));
        assert!(step_ifrk4(&s, 0.5 * lim).is_ok());
        assert_eq!(cfl_limit(&MHDState::zeros(&g)), f64::INFINITY);
    }
}
