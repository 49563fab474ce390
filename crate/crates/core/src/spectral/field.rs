use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A real periodic scalar field held by its Fourier coefficients.
///
/// Coefficients satisfy `c(-k) = conj(c(k))` and vanish on Nyquist rows.
/// Every constructor enforces both.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.len()],
        }
    }

    /// Constant field `c` (zero mode only).
    pub fn constant(grid: &Grid, c: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// Wraps a coefficient array, symmetrizing it and clearing Nyquist rows.
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("coefficient array".into()));
        }
        let mut f = Self {
            grid: grid.clone(),
            coeffs,
        };
        f.symmetrize();
        Ok(f)
    }

    /// Builds a field from physical samples laid out in the grid's flat order.
    pub fn from_physical(grid: &Grid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("physical samples".into()));
        }
        let mut data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.fft_forward(&mut data);
        let scale = 1.0 / grid.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
        let mut f = Self {
            grid: grid.clone(),
            coeffs: data,
        };
        f.symmetrize();
        Ok(f)
    }

    /// Samples `f(x)` at the grid points.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let dim = grid.dim();
        let samples: Vec<f64> = (0..grid.len())
            .map(|i| {
                let x = grid.point(i);
                f(&x[..dim])
            })
            .collect();
        Self::from_physical(grid, &samples)
    }

    /// Single real Fourier mode `amp·cos(k·x + phase)`.
    pub fn mode(grid: &Grid, k: &[i32], amp: f64, phase: f64) -> Result<Self> {
        let idx = grid
            .index_of(k)
            .ok_or_else(|| Error::InvalidArgument(format!("wavenumber {k:?} not on the lattice")))?;
        let mut f = Self::zeros(grid);
        let neg = grid.negated(idx);
        let c = Complex64::from_polar(0.5 * amp, phase);
        if neg == idx {
            f.coeffs[idx] = Complex64::new(amp * phase.cos(), 0.0);
        } else {
            f.coeffs[idx] = c;
            f.coeffs[neg] = c.conj();
        }
        Ok(f)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: &[i32]) -> Option<Complex64> {
        self.grid.index_of(k).map(|i| self.coeffs[i])
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// The field with its zero mode removed.
    pub fn without_mean(&self) -> ScalarField {
        let mut f = self.clone();
        f.coeffs[0] = ZERO;
        f
    }

    pub fn require_mean_free(&self, tol: f64) -> Result<()> {
        let scale = self.l2_norm().max(1.0);
        if self.coeffs[0].norm() > tol * scale {
            return Err(Error::NotMeanFree(self.coeffs[0].norm()));
        }
        Ok(())
    }

    /// Physical samples in the grid's flat order.
    pub fn to_physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        self.grid.fft_inverse(&mut data);
        data.into_iter().map(|c| c.re).collect()
    }

    /// `Σ |c_k|²`, the squared L² norm under the normalized measure.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Real L² inner product.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|c(-k) - conj(c(k))|` over the lattice.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[self.grid.negated(i)] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn nyquist_content(&self) -> f64 {
        (0..self.coeffs.len())
            .filter(|&i| self.grid.is_nyquist(i))
            .map(|i| self.coeffs[i].norm())
            .fold(0.0, f64::max)
    }

    /// Coefficientwise multiplication by a real multiplier tabulated on the lattice.
    pub fn apply_multiplier(&self, multiplier: &[f64]) -> ScalarField {
        debug_assert_eq!(multiplier.len(), self.coeffs.len());
        let coeffs = self
            .coeffs
            .iter()
            .zip(multiplier)
            .map(|(c, &m)| c * m)
            .collect();
        ScalarField {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(usize, Complex64) -> Complex64) -> ScalarField {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &c)| f(i, c)).collect();
        let mut out = ScalarField {
            grid: self.grid.clone(),
            coeffs,
        };
        out.symmetrize();
        out
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + a·x`.
    pub fn axpy(&self, a: f64, x: &ScalarField) -> Result<ScalarField> {
        self.zip_with(x, |s, xv| s + xv * a)
    }

    fn zip_with(
        &self,
        other: &ScalarField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ScalarField> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(ScalarField {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Restores Hermitian symmetry and clears Nyquist rows.
    pub(crate) fn symmetrize(&mut self) {
        let grid = self.grid.clone();
        for i in 0..self.coeffs.len() {
            if grid.is_nyquist(i) {
                self.coeffs[i] = ZERO;
                continue;
            }
            let j = grid.negated(i);
            if j < i {
                continue;
            }
            if j == i {
                self.coeffs[i] = Complex64::new(self.coeffs[i].re, 0.0);
            } else {
                let avg = 0.5 * (self.coeffs[i] + self.coeffs[j].conj());
                self.coeffs[i] = avg;
                self.coeffs[j] = avg.conj();
            }
        }
    }

    /// Copies the modes both lattices resolve onto `target`; others are dropped or left zero.
    pub fn resample(&self, target: &Grid) -> Result<ScalarField> {
        if target.dim() != self.grid.dim() {
            return Err(Error::GridMismatch);
        }
        let dim = target.dim();
        let mut coeffs = vec![ZERO; target.len()];
        for (i, c) in coeffs.iter_mut().enumerate() {
            if target.is_nyquist(i) {
                continue;
            }
            let k = target.wavenumber(i);
            if let Some(src) = self.grid.index_of(&k[..dim]) {
                *c = self.coeffs[src];
            }
        }
        Ok(ScalarField {
            grid: target.clone(),
            coeffs,
        })
    }

    pub(crate) fn from_raw(grid: &Grid, coeffs: Vec<Complex64>) -> ScalarField {
        ScalarField {
            grid: grid.clone(),
            coeffs,
        }
    }
}

/// A vector field with `dim` scalar components on one grid.
#[derive(Clone, Debug)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            components: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn from_components(components: Vec<ScalarField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("vector field needs components".into()))?;
        let grid = first.grid().clone();
        if components.len() != grid.dim() {
            return Err(Error::InvalidArgument(format!(
                "{} components on a {}-dimensional grid",
                components.len(),
                grid.dim()
            )));
        }
        if components.iter().any(|c| !c.grid().same_as(&grid)) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { components })
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.components[i]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> VectorField {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn axpy(&self, a: f64, x: &VectorField) -> Result<VectorField> {
        self.zip(x, |s, xv| s.axpy(a, xv))
    }

    pub fn scale(&self, s: f64) -> VectorField {
        self.map(|c| c.scale(s))
    }

    fn zip(
        &self,
        other: &VectorField,
        f: impl Fn(&ScalarField, &ScalarField) -> Result<ScalarField>,
    ) -> Result<VectorField> {
        if self.dim() != other.dim() {
            return Err(Error::GridMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { components })
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.components.iter().map(ScalarField::l2_norm_sq).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn inner(&self, other: &VectorField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn apply_multiplier(&self, multiplier: &[f64]) -> VectorField {
        self.map(|c| c.apply_multiplier(multiplier))
    }

    pub fn resample(&self, target: &Grid) -> Result<VectorField> {
        let components = self
            .components
            .iter()
            .map(|c| c.resample(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { components })
    }

    pub fn max_abs_mean(&self) -> f64 {
        self.components.iter().map(|c| c.mean().abs()).fold(0.0, f64::max)
    }

    pub fn require_mean_free(&self, tol: f64) -> Result<()> {
        self.components.iter().try_for_each(|c| c.require_mean_free(tol))
    }

    /// Physical samples of every component.
    pub fn to_physical(&self) -> Vec<Vec<f64>> {
        self.components.iter().map(ScalarField::to_physical).collect()
    }
}
