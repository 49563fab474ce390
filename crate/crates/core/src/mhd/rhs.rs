use crate::error::{Error, Result};
use crate::spectral::{dealiased_physical, leray_project, partial, product_to_spectral, ScalarField, VectorField};

use super::MHDState;

/// `coef · a⊗c` with `(a⊗c)_{ij} = a_i c_j`, both factors given as dealiased physical samples.
pub struct TensorTerm<'a> {
    pub coef: f64,
    pub a: &'a [Vec<f64>],
    pub c: &'a [Vec<f64>],
}

/// `P∇·Σ coef·(a⊗c)` with `(∇·(a⊗c))_i = Σ_j ∂_j(a_j c_i)`, so `∇·(a⊗c) = (a·∇)c` for
/// divergence-free `a`; the tensor sum is truncated once.
pub fn projected_divergence(grid: &crate::spectral::Grid, terms: &[TensorTerm<'_>]) -> Result<VectorField> {
    let dim = grid.dim();
    let len = grid.len();
    for t in terms {
        if t.a.len() != dim || t.c.len() != dim || t.a.iter().chain(t.c).any(|v| v.len() != len) {
            return Err(Error::GridMismatch);
        }
    }
    let mut comps = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut acc = ScalarField::zeros(grid);
        for j in 0..dim {
            let mut m = vec![0.0; len];
            for t in terms {
                let (aj, ci) = (&t.a[j], &t.c[i]);
                for ((mv, x), y) in m.iter_mut().zip(aj).zip(ci) {
                    *mv += t.coef * x * y;
                }
            }
            acc = acc.add(&partial(&product_to_spectral(grid, &m), j))?;
        }
        comps.push(acc);
    }
    Ok(leray_project(&VectorField::from_components(comps)?))
}

pub(crate) fn physical(v: &VectorField) -> Vec<Vec<f64>> {
    v.components().iter().map(dealiased_physical).collect()
}

/// MHD tendencies without the Laplacian.
pub fn nonlinear_rhs(state: &MHDState) -> Result<(VectorField, VectorField)> {
    state.validate()?;
    Ok(raw_rhs(&state.u, &state.b))
}

pub(crate) fn raw_rhs(u: &VectorField, b: &VectorField) -> (VectorField, VectorField) {
    let grid = u.grid();
    let (pu, pb) = (physical(u), physical(b));
    let du = projected_divergence(
        grid,
        &[
            TensorTerm { coef: -1.0, a: &pu, c: &pu },
            TensorTerm { coef: 1.0, a: &pb, c: &pb },
        ],
    )
    .expect("shared grid");
    let db = projected_divergence(
        grid,
        &[
            TensorTerm { coef: -1.0, a: &pu, c: &pb },
            TensorTerm { coef: 1.0, a: &pb, c: &pu },
        ],
    )
    .expect("shared grid");
    (du, db)
}

/// `exp(-|k|² dt)` on the lattice.
pub fn heat_multiplier(grid: &crate::spectral::Grid, dt: f64) -> Vec<f64> {
    grid.k_squared().iter().map(|k| (-k * dt).exp()).collect()
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_nan() || dt < 0.0 || dt.is_infinite() {
        return Err(Error::InvalidArgument(format!("heat propagation needs finite dt ≥ 0, got {dt}")));
    }
    Ok(())
}

/// `e^{dtΔ} f`, exact on the grid.
pub fn heat_propagate(f: &ScalarField, dt: f64) -> Result<ScalarField> {
    check_dt(dt)?;
    Ok(f.apply_multiplier(&heat_multiplier(f.grid(), dt)))
}

pub fn heat_propagate_vector(v: &VectorField, dt: f64) -> Result<VectorField> {
    check_dt(dt)?;
    Ok(v.apply_multiplier(&heat_multiplier(v.grid(), dt)))
}
