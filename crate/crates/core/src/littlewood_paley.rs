//! Dyadic partition of unity on the wavenumber lattice and the band operators Δ_j, S_j.
//!
//! The low-pass profile χ is radial, equal to 1 on `|ξ| ≤ 3/4`, vanishes on
//! `|ξ| ≥ 4/3`, and in between follows the `exp(-1/t)` smooth step. The band
//! multiplier is the telescoping difference `φ(ξ) = χ(ξ/2) - χ(ξ)`, supported in
//! the annulus `3/4 ≤ |ξ| ≤ 8/3`. Because every φ_j is a difference of two χ
//! values, partial sums of bands collapse to a difference of two χ values and
//! are exact to round-off.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField, VectorField};

pub const CHI_FLAT: f64 = 0.75;
pub const CHI_CUTOFF: f64 = 4.0 / 3.0;
pub const ANNULUS_INNER: f64 = 0.75;
pub const ANNULUS_OUTER: f64 = 8.0 / 3.0;

/// Zero mode tolerance for homogeneous band operators.
const MEAN_TOL: f64 = 1e-12;

fn psi(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// C^∞ step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = psi(t);
        a / (a + psi(1.0 - t))
    }
}

/// Radial low-pass profile χ(|ξ|).
pub fn chi(r: f64) -> f64 {
    1.0 - smooth_step((r - CHI_FLAT) / (CHI_CUTOFF - CHI_FLAT))
}

/// Radial band profile φ(|ξ|) = χ(|ξ|/2) - χ(|ξ|).
pub fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Dyadic band index j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BandIndex(pub i32);

/// Default band range for an `n`-point grid: `j_min = -2`, `j_max = floor(log2(2n/3)) - 2`.
pub fn default_band_range(n: usize) -> (i32, i32) {
    let j_max = (2.0 * n as f64 / 3.0).log2().floor() as i32 - 2;
    (-2, j_max)
}

/// The multipliers χ(2^{-j}k) and φ(2^{-j}k) tabulated on a grid for `j_min ≤ j ≤ j_max`.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    j_min: i32,
    j_max: i32,
    radius: Vec<f64>,
    chi_values: Vec<f64>,
    // Index j - j_min.
    phi_values: Vec<Vec<f64>>,
    // χ(2^{-j}k) for j in [j_min - 1, j_max + 1]; index j - j_min + 1.
    low_pass: Vec<Vec<f64>>,
}

impl DyadicPartition {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn bands(&self) -> impl Iterator<Item = BandIndex> + Clone {
        (self.j_min..=self.j_max).map(BandIndex)
    }

    pub fn band_count(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    /// χ(k) on the lattice.
    pub fn chi_values(&self) -> &[f64] {
        &self.chi_values
    }

    /// |k| on the lattice.
    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    /// Wavenumbers where `Σ_{j_min}^{j_max} φ_j = 1`: `(4/3)·2^{j_min} ≤ |k| ≤ (3/2)·2^{j_max}`.
    pub fn covered_annulus(&self) -> (f64, f64) {
        (
            CHI_CUTOFF * 2f64.powi(self.j_min),
            CHI_FLAT * 2f64.powi(self.j_max + 1),
        )
    }

    pub fn check_band(&self, j: BandIndex) -> Result<()> {
        if j.0 < self.j_min || j.0 > self.j_max {
            return Err(Error::BandOutOfRange {
                j: j.0,
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        Ok(())
    }

    /// φ(2^{-j}k) on the lattice.
    pub fn phi(&self, j: BandIndex) -> Result<&[f64]> {
        self.check_band(j)?;
        Ok(&self.phi_values[(j.0 - self.j_min) as usize])
    }

    /// χ(2^{-j}k) on the lattice for `j_min - 1 ≤ j ≤ j_max + 1`.
    pub fn low_pass(&self, j: i32) -> Result<&[f64]> {
        if j < self.j_min - 1 || j > self.j_max + 1 {
            return Err(Error::BandOutOfRange {
                j,
                j_min: self.j_min - 1,
                j_max: self.j_max + 1,
            });
        }
        Ok(&self.low_pass[(j - self.j_min + 1) as usize])
    }

    fn check_field(&self, f: &ScalarField) -> Result<()> {
        if !f.grid().same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        f.require_mean_free(MEAN_TOL)
    }
}

/// Tabulates χ and the band multipliers for `j_min ≤ j ≤ j_max`.
///
/// The top band's outer support `(8/3)·2^{j_max}` must fit inside the
/// dealiased radius `n/3`.
pub fn build_partition(grid: &Grid, j_min: i32, j_max: i32) -> Result<DyadicPartition> {
    if j_min > 0 || j_max < 0 {
        return Err(Error::BandRange {
            j_min,
            j_max,
            detail: "need j_min ≤ 0 ≤ j_max".into(),
        });
    }
    let top = ANNULUS_OUTER * 2f64.powi(j_max);
    let limit = grid.dealias_radius();
    if top > limit * (1.0 + 1e-12) {
        return Err(Error::BandRange {
            j_min,
            j_max,
            detail: format!("top band reaches |k| = {top:.3}, beyond the dealiased radius {limit:.3}"),
        });
    }

    let radius: Vec<f64> = grid.k_squared().iter().map(|k| k.sqrt()).collect();
    let tabulate = |j: i32| -> Vec<f64> {
        let scale = 2f64.powi(-j);
        radius.iter().map(|&r| chi(scale * r)).collect()
    };
    let low_pass: Vec<Vec<f64>> = (j_min - 1..=j_max + 1).map(tabulate).collect();
    let phi_values = (j_min..=j_max)
        .map(|j| {
            let hi = &low_pass[(j + 1 - j_min + 1) as usize];
            let lo = &low_pass[(j - j_min + 1) as usize];
            hi.iter().zip(lo).map(|(a, b)| a - b).collect()
        })
        .collect();
    let chi_values = tabulate(0);

    Ok(DyadicPartition {
        grid: grid.clone(),
        j_min,
        j_max,
        radius,
        chi_values,
        phi_values,
        low_pass,
    })
}

/// Partition with the default band range for the grid.
pub fn default_partition(grid: &Grid) -> Result<DyadicPartition> {
    let (j_min, j_max) = default_band_range(grid.n());
    build_partition(grid, j_min, j_max)
}

/// Δ_j f: coefficientwise multiplication by φ(2^{-j}k).
pub fn delta_j(f: &ScalarField, j: BandIndex, part: &DyadicPartition) -> Result<ScalarField> {
    part.check_field(f)?;
    Ok(f.apply_multiplier(part.phi(j)?))
}

/// S_j f: coefficientwise multiplication by χ(2^{-j}k).
pub fn s_j(f: &ScalarField, j: BandIndex, part: &DyadicPartition) -> Result<ScalarField> {
    part.check_field(f)?;
    part.check_band(j)?;
    Ok(f.apply_multiplier(part.low_pass(j.0)?))
}

/// All bands of f, in order `j_min..=j_max`, computed in parallel.
pub fn decompose(f: &ScalarField, part: &DyadicPartition) -> Result<Vec<ScalarField>> {
    part.check_field(f)?;
    Ok(part
        .phi_values
        .par_iter()
        .map(|m| f.apply_multiplier(m))
        .collect())
}

pub fn delta_j_vector(v: &VectorField, j: BandIndex, part: &DyadicPartition) -> Result<VectorField> {
    let comps = v
        .components()
        .iter()
        .map(|c| delta_j(c, j, part))
        .collect::<Result<Vec<_>>>()?;
    VectorField::from_components(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn profile_examples() {
        assert_eq!(phi(1.0) + phi(2.0), chi(0.5) - chi(2.0));
        assert_eq!(phi(1.0) + phi(2.0), 1.0);
        assert_eq!(phi(0.5), 0.0);
        assert_eq!(phi(ANNULUS_OUTER), 0.0);
        assert_eq!(phi(ANNULUS_INNER), 0.0);
        assert_eq!(chi(CHI_FLAT), 1.0);
        assert_eq!(chi(CHI_CUTOFF), 0.0);
        // Monotone in the transition region.
        let mut prev = 1.0;
        for i in 0..=100 {
            let r = CHI_FLAT + (CHI_CUTOFF - CHI_FLAT) * i as f64 / 100.0;
            let c = chi(r);
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn default_ranges() {
        assert_eq!(default_band_range(128), (-2, 4));
        assert_eq!(default_band_range(64), (-2, 3));
        assert_eq!(default_band_range(16), (-2, 1));
    }

    #[test]
    fn rejects_unresolved_top_band() {
        let g = make_grid(2, 128).unwrap();
        assert!(build_partition(&g, -2, 4).is_ok());
        assert!(matches!(build_partition(&g, -2, 5), Err(Error::BandRange { .. })));
        assert!(matches!(build_partition(&g, 1, 4), Err(Error::BandRange { .. })));
    }

    #[test]
    fn cos4_lives_in_bands_one_and_two() {
        let g = make_grid(2, 64).unwrap();
        let part = default_partition(&g).unwrap();
        let f = ScalarField::mode(&g, &[4, 0], 1.0, 0.0).unwrap();
        let mut sum = ScalarField::zeros(&g);
        for j in part.bands() {
            let d = delta_j(&f, j, &part).unwrap();
            if j.0 == 1 || j.0 == 2 {
                assert!(d.l2_norm() > 0.0);
            } else {
                assert_eq!(d.l2_norm(), 0.0);
            }
            sum = sum.add(&d).unwrap();
        }
        assert!(sum.sub(&f).unwrap().l2_norm() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn low_pass_examples() {
        let g = make_grid(2, 64).unwrap();
        let part = default_partition(&g).unwrap();
        let f = ScalarField::mode(&g, &[4, 0], 1.0, 0.0).unwrap();
        // j_max = 3 < 4 here; use a finer grid for S_4.
        assert_eq!(s_j(&f, BandIndex(0), &part).unwrap().l2_norm(), 0.0);
        let g2 = make_grid(2, 128).unwrap();
        let part2 = default_partition(&g2).unwrap();
        let f2 = ScalarField::mode(&g2, &[4, 0], 1.0, 0.0).unwrap();
        let s4 = s_j(&f2, BandIndex(4), &part2).unwrap();
        assert_eq!(s4.sub(&f2).unwrap().l2_norm(), 0.0);
    }

    #[test]
    fn zero_field_and_bad_inputs() {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let z = ScalarField::zeros(&g);
        for j in part.bands() {
            assert_eq!(delta_j(&z, j, &part).unwrap().l2_norm(), 0.0);
        }
        assert!(matches!(
            delta_j(&z, BandIndex(9), &part),
            Err(Error::BandOutOfRange { .. })
        ));
        let c = ScalarField::constant(&g, 1.0);
        assert!(matches!(delta_j(&c, BandIndex(0), &part), Err(Error::NotMeanFree(_))));
    }
}
