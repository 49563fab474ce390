//! Spectral differentiation, Leray projection, dealiased products and Lebesgue norms.

use num_complex::Complex64;

use super::field::{ScalarField, VectorField};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Normalized-measure L^p norm of physical samples, `(mean |f|^p)^{1/p}`; `p = ∞` gives `max |f|`.
pub fn lp_norm_samples(samples: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("samples".into()));
    }
    if samples.is_empty() {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(samples.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let max = samples.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if max == 0.0 {
        return Ok(0.0);
    }
    // Scale by the maximum so large p cannot overflow.
    let mean: f64 = samples.iter().map(|v| (v.abs() / max).powf(p)).sum::<f64>() / samples.len() as f64;
    Ok(max * mean.powf(1.0 / p))
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("Lebesgue exponent must be ≥ 1, got {p}")));
    }
    Ok(())
}

/// Normalized-measure L^p norm by physical-space quadrature.
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    check_exponent(p)?;
    lp_norm_samples(&f.to_physical(), p)
}

/// L^p norm of the pointwise Euclidean magnitude of a collection of scalar fields.
pub fn magnitude_lp_norm(fields: &[&ScalarField], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let Some(first) = fields.first() else {
        return Ok(0.0);
    };
    if fields.len() == 1 {
        return lp_norm(first, p);
    }
    let mut mag = vec![0.0; first.grid().len()];
    for f in fields {
        if !f.grid().same_as(first.grid()) {
            return Err(Error::GridMismatch);
        }
        for (m, v) in mag.iter_mut().zip(f.to_physical()) {
            *m += v * v;
        }
    }
    mag.iter_mut().for_each(|m| *m = m.sqrt());
    lp_norm_samples(&mag, p)
}

/// L^p norm of `|v(x)|`.
pub fn vector_lp_norm(v: &VectorField, p: f64) -> Result<f64> {
    let refs: Vec<&ScalarField> = v.components().iter().collect();
    magnitude_lp_norm(&refs, p)
}

/// L^p norm of the Frobenius magnitude of `∇v`.
pub fn gradient_lp_norm(v: &VectorField, p: f64) -> Result<f64> {
    let grads: Vec<ScalarField> = v
        .components()
        .iter()
        .flat_map(|c| gradient(c).into_components())
        .collect();
    let refs: Vec<&ScalarField> = grads.iter().collect();
    magnitude_lp_norm(&refs, p)
}

/// `∂f/∂x_axis`.
pub fn partial(f: &ScalarField, axis: usize) -> ScalarField {
    let grid = f.grid().clone();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| c * I * grid.wavenumber(i)[axis] as f64)
        .collect();
    ScalarField::from_raw(&grid, coeffs)
}

pub fn gradient(f: &ScalarField) -> VectorField {
    let comps = (0..f.grid().dim()).map(|a| partial(f, a)).collect();
    VectorField::from_components(comps).expect("gradient components share a grid")
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let grid = v.grid().clone();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (axis, comp) in v.components().iter().enumerate() {
        for (i, (acc, &c)) in coeffs.iter_mut().zip(comp.coeffs()).enumerate() {
            *acc += c * I * grid.wavenumber(i)[axis] as f64;
        }
    }
    ScalarField::from_raw(&grid, coeffs)
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    let k2 = f.grid().k_squared().to_vec();
    let neg: Vec<f64> = k2.iter().map(|k| -k).collect();
    f.apply_multiplier(&neg)
}

/// Largest spectral magnitude of `div v`.
pub fn divergence_max(v: &VectorField) -> f64 {
    divergence(v).max_abs_coeff()
}

/// Leray projection onto divergence-free fields: `v̂ - k (k·v̂)/|k|²`, zero mode unchanged.
pub fn leray_project(v: &VectorField) -> VectorField {
    let grid = v.grid().clone();
    let dim = grid.dim();
    let k2 = grid.k_squared();
    let mut out: Vec<Vec<Complex64>> = v.components().iter().map(|c| c.coeffs().to_vec()).collect();
    for i in 0..grid.len() {
        if k2[i] == 0.0 {
            continue;
        }
        let k = grid.wavenumber(i);
        let mut kdotv = Complex64::new(0.0, 0.0);
        for a in 0..dim {
            kdotv += out[a][i] * k[a] as f64;
        }
        let factor = kdotv / k2[i];
        for a in 0..dim {
            out[a][i] -= factor * k[a] as f64;
        }
    }
    let comps = out.into_iter().map(|c| ScalarField::from_raw(&grid, c)).collect();
    VectorField::from_components(comps).expect("projection preserves grid")
}

/// Zeroes every coefficient outside the 2/3-rule ball.
pub fn dealias(f: &ScalarField) -> ScalarField {
    let grid = f.grid().clone();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| if grid.in_dealiased_ball(i) { c } else { Complex64::new(0.0, 0.0) })
        .collect();
    ScalarField::from_raw(&grid, coeffs)
}

/// Physical samples of the dealiased field, ready for pointwise products.
pub fn dealiased_physical(f: &ScalarField) -> Vec<f64> {
    dealias(f).to_physical()
}

/// Transforms a pointwise product back and truncates it to the dealiased ball.
pub fn product_to_spectral(grid: &super::Grid, samples: &[f64]) -> ScalarField {
    let mut data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.fft_forward(&mut data);
    let scale = 1.0 / grid.len() as f64;
    for (i, c) in data.iter_mut().enumerate() {
        if grid.in_dealiased_ball(i) {
            *c *= scale;
        } else {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let mut f = ScalarField::from_raw(grid, data);
    f.symmetrize();
    f
}

/// Pointwise product with 2/3-rule truncation of both inputs and the output.
pub fn multiply_dealiased(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    if !f.grid().same_as(g.grid()) {
        return Err(Error::GridMismatch);
    }
    let a = dealiased_physical(f);
    let b = dealiased_physical(g);
    let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(product_to_spectral(f.grid(), &prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn lp_norm_examples() {
        let g = make_grid(2, 32).unwrap();
        let zero = ScalarField::zeros(&g);
        assert_eq!(lp_norm(&zero, 2.0).unwrap(), 0.0);
        let c = ScalarField::from_fn(&g, |x| x[0].cos()).unwrap();
        assert!((lp_norm(&c, 2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((lp_norm(&c, f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(lp_norm(&c, 0.5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn cos4_quadrature_matches_fine_grid_oracle() {
        // Oracle: midpoint rule on 200k points for (1/2π)∫cos⁴, independent of the FFT grid.
        let m = 200_000;
        let oracle: f64 = (0..m)
            .map(|i| {
                let x = (i as f64 + 0.5) * 2.0 * std::f64::consts::PI / m as f64;
                x.cos().powi(4)
            })
            .sum::<f64>()
            / m as f64;
        assert!((oracle - 0.375).abs() < 1e-12);
        let g = make_grid(2, 16).unwrap();
        let c = ScalarField::from_fn(&g, |x| x[0].cos()).unwrap();
        let v = lp_norm(&c, 4.0).unwrap();
        assert!((v - oracle.powf(0.25)).abs() < 1e-13);
    }

    #[test]
    fn derivative_examples() {
        let g = make_grid(2, 16).unwrap();
        let v = VectorField::from_components(vec![
            ScalarField::from_fn(&g, |x| x[1].sin()).unwrap(),
            ScalarField::zeros(&g),
        ])
        .unwrap();
        assert!(divergence(&v).max_abs_coeff() < 1e-15);

        let f = ScalarField::from_fn(&g, |x| (2.0 * x[0]).cos()).unwrap();
        let expect = f.scale(-4.0);
        assert!(laplacian(&f).sub(&expect).unwrap().l2_norm() < 1e-14);

        let h = ScalarField::from_fn(&g, |x| x[0].cos() * x[1].cos()).unwrap();
        let lap = divergence(&gradient(&h));
        assert!(lap.sub(&h.scale(-2.0)).unwrap().l2_norm() < 1e-14);
    }

    #[test]
    fn leray_examples() {
        let g = make_grid(2, 16).unwrap();
        let v = VectorField::from_components(vec![
            ScalarField::from_fn(&g, |x| x[1].sin()).unwrap(),
            ScalarField::zeros(&g),
        ])
        .unwrap();
        assert!(leray_project(&v).sub(&v).unwrap().l2_norm() < 1e-15);

        let phi = ScalarField::from_fn(&g, |x| x[0].cos() * x[1].cos()).unwrap();
        let grad = gradient(&phi);
        assert!(leray_project(&grad).l2_norm() < 1e-15);
    }

    #[test]
    fn product_examples() {
        let g = make_grid(2, 16).unwrap();
        let c = ScalarField::from_fn(&g, |x| x[0].cos()).unwrap();
        let sq = multiply_dealiased(&c, &c).unwrap();
        let expect = ScalarField::from_fn(&g, |x| 0.5 + 0.5 * (2.0 * x[0]).cos()).unwrap();
        assert!(sq.sub(&expect).unwrap().l2_norm() < 1e-14);

        let samples: Vec<f64> = (0..g.len()).map(|i| ((i * 31) % 17) as f64 - 8.0).collect();
        let arb = ScalarField::from_physical(&g, &samples).unwrap();
        let one = ScalarField::constant(&g, 1.0);
        let prod = multiply_dealiased(&one, &arb).unwrap();
        assert!(prod.sub(&dealias(&arb)).unwrap().l2_norm() < 1e-13);
    }
}
