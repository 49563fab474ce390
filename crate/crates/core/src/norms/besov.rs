use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::spectral::{check_exponent, magnitude_lp_norm, ScalarField, VectorField};

/// Regularity `s`, integrability `p` and summability `r` of a Besov norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        let spec = Self { s, p, r };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::InvalidArgument(format!("regularity must be finite, got {}", self.s)));
        }
        check_exponent(self.p)?;
        check_exponent(self.r)
    }

    /// Critical regularity `n/p - 1` for the given dimension.
    pub fn critical(dim: usize, p: f64, r: f64) -> Result<Self> {
        Self::new(dim as f64 / p - 1.0, p, r)
    }
}

/// `(Σ a_j^r)^{1/r}`, or `max a_j` when `r = ∞`.
pub fn lr_sum(values: impl IntoIterator<Item = f64>, r: f64) -> f64 {
    if r.is_infinite() {
        values.into_iter().fold(0.0, f64::max)
    } else {
        let vals: Vec<f64> = values.into_iter().collect();
        let max = vals.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        if max == 0.0 {
            return 0.0;
        }
        max * vals.iter().map(|v| (v.abs() / max).powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `‖Δ_j f‖_p` for every band, where f may be vector-valued (pointwise Euclidean magnitude).
///
/// For `p = 2` the discrete Parseval identity gives the quadrature value directly
/// from the coefficients.
pub fn band_lp_norms(components: &[&ScalarField], p: f64, part: &DyadicPartition) -> Result<Vec<f64>> {
    check_exponent(p)?;
    for c in components {
        if !c.grid().same_as(part.grid()) {
            return Err(Error::GridMismatch);
        }
    }
    part.bands()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|j| {
            let phi = part.phi(j)?;
            if p == 2.0 {
                let sum: f64 = components
                    .iter()
                    .map(|c| {
                        c.coeffs()
                            .iter()
                            .zip(phi)
                            .map(|(z, &m)| z.norm_sqr() * m * m)
                            .sum::<f64>()
                    })
                    .sum();
                Ok(sum.sqrt())
            } else {
                let bands: Vec<ScalarField> = components.iter().map(|c| c.apply_multiplier(phi)).collect();
                let refs: Vec<&ScalarField> = bands.iter().collect();
                magnitude_lp_norm(&refs, p)
            }
        })
        .collect()
}

fn check_coverage(components: &[&ScalarField], part: &DyadicPartition) -> Result<()> {
    let (lo, _) = part.covered_annulus();
    let top = crate::littlewood_paley::ANNULUS_OUTER * 2f64.powi(part.j_max());
    for c in components {
        c.require_mean_free(1e-12)?;
        let tol = 1e-12 * c.l2_norm();
        let outside = c
            .coeffs()
            .iter()
            .zip(part.radius())
            .any(|(z, &k)| k > 0.0 && (k >= top || k <= lo * 0.5) && z.norm() > tol);
        if outside {
            return Err(Error::InvalidArgument(
                "field has content outside the partition's band coverage".into(),
            ));
        }
    }
    Ok(())
}

fn weighted_sum(band_norms: &[f64], spec: &BesovSpec, j_min: i32) -> f64 {
    lr_sum(
        band_norms
            .iter()
            .enumerate()
            .map(|(i, &a)| 2f64.powf((j_min + i as i32) as f64 * spec.s) * a),
        spec.r,
    )
}

/// Homogeneous Besov norm over the partition's bands; f must be mean-free.
pub fn besov_norm(f: &ScalarField, spec: &BesovSpec, part: &DyadicPartition) -> Result<f64> {
    besov_norm_components(&[f], spec, part)
}

/// Homogeneous Besov norm of a vector field, bands measured by `‖|Δ_j v|‖_p`.
pub fn besov_norm_vector(v: &VectorField, spec: &BesovSpec, part: &DyadicPartition) -> Result<f64> {
    let refs: Vec<&ScalarField> = v.components().iter().collect();
    besov_norm_components(&refs, spec, part)
}

pub(crate) fn besov_norm_components(
    components: &[&ScalarField],
    spec: &BesovSpec,
    part: &DyadicPartition,
) -> Result<f64> {
    spec.validate()?;
    check_coverage(components, part)?;
    let bands = band_lp_norms(components, spec.p, part)?;
    Ok(weighted_sum(&bands, spec, part.j_min()))
}

/// Per-band weighted values `2^{js}‖Δ_j f‖_p`.
pub fn besov_profile(components: &[&ScalarField], spec: &BesovSpec, part: &DyadicPartition) -> Result<Vec<f64>> {
    spec.validate()?;
    let bands = band_lp_norms(components, spec.p, part)?;
    Ok(bands
        .iter()
        .enumerate()
        .map(|(i, &a)| 2f64.powf((part.j_min() + i as i32) as f64 * spec.s) * a)
        .collect())
}

/// Inhomogeneous Besov norm: bands `j ≥ 0` plus `‖S_0 f‖_p`; the mean is carried by `S_0`.
pub fn inhomog_besov_norm(f: &ScalarField, spec: &BesovSpec, part: &DyadicPartition) -> Result<f64> {
    spec.validate()?;
    if !f.grid().same_as(part.grid()) {
        return Err(Error::GridMismatch);
    }
    let mut high = Vec::new();
    for j in 0..=part.j_max() {
        let band = f.apply_multiplier(part.phi(crate::littlewood_paley::BandIndex(j))?);
        high.push(2f64.powf(j as f64 * spec.s) * magnitude_lp_norm(&[&band], spec.p)?);
    }
    let low = f.apply_multiplier(part.low_pass(0)?);
    Ok(lr_sum(high, spec.r) + magnitude_lp_norm(&[&low], spec.p)?)
}
