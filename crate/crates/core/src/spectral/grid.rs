use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid on the 2π-torus in two or three dimensions.
///
/// Spectral arrays are stored in FFT order: flat index `((i0 * n) + i1) * n + i2`
/// with axis 0 slowest, and lattice index `i` on an axis carrying wavenumber
/// `i` for `i < n/2` and `i - n` otherwise. The single Nyquist row `-n/2` on
/// each axis is masked out of every field.
///
/// Norms use the normalized measure `dx / (2π)^dim`, so a field with
/// coefficients `c_k` (meaning `f(x) = Σ c_k e^{ik·x}`) has `‖f‖₂² = Σ |c_k|²`.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    dim: usize,
    n: usize,
    len: usize,
    wavenumbers: Vec<[i32; 3]>,
    k2: Vec<f64>,
    nyquist: Vec<bool>,
    dealias: Vec<bool>,
    negated: Vec<usize>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidGrid(format!("dimension must be 2 or 3, got {dim}")));
        }
        if !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("{n} points per axis is not a power of two")));
        }
        if n < 16 {
            return Err(Error::InvalidGrid(format!("need at least 16 points per axis, got {n}")));
        }

        let len = n.pow(dim as u32);
        let half = (n / 2) as i32;
        let axis_k = |i: usize| -> i32 {
            let i = i as i32;
            if i < half {
                i
            } else {
                i - n as i32
            }
        };
        let cutoff2 = (n as f64 / 3.0).powi(2);

        let mut wavenumbers = Vec::with_capacity(len);
        let mut k2 = Vec::with_capacity(len);
        let mut nyquist = Vec::with_capacity(len);
        let mut dealias = Vec::with_capacity(len);
        let mut negated = Vec::with_capacity(len);
        for idx in 0..len {
            let mut k = [0i32; 3];
            let mut rem = idx;
            for axis in (0..dim).rev() {
                k[axis] = axis_k(rem % n);
                rem /= n;
            }
            let kk: f64 = k.iter().map(|&c| (c as f64) * (c as f64)).sum();
            let nyq = k[..dim].iter().any(|&c| c == -half);
            let mut neg = 0usize;
            for &c in &k[..dim] {
                let i = (-c).rem_euclid(n as i32) as usize;
                neg = neg * n + i;
            }
            wavenumbers.push(k);
            k2.push(kk);
            nyquist.push(nyq);
            dealias.push(!nyq && kk <= cutoff2);
            negated.push(neg);
        }

        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        Ok(Self {
            inner: Arc::new(GridInner {
                dim,
                n,
                len,
                wavenumbers,
                k2,
                nyquist,
                dealias,
                negated,
                forward,
                inverse,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.inner.n
    }

    /// Total number of lattice points, `n^dim`.
    pub fn len(&self) -> usize {
        self.inner.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI
    }

    /// Integer wavenumber at a flat index; unused trailing entries are zero.
    pub fn wavenumber(&self, idx: usize) -> [i32; 3] {
        self.inner.wavenumbers[idx]
    }

    pub fn k_squared(&self) -> &[f64] {
        &self.inner.k2
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.inner.nyquist[idx]
    }

    /// True inside the 2/3-rule ball `|k| ≤ n/3` (Nyquist rows excluded).
    pub fn in_dealiased_ball(&self, idx: usize) -> bool {
        self.inner.dealias[idx]
    }

    /// Radius of the dealiased ball.
    pub fn dealias_radius(&self) -> f64 {
        self.inner.n as f64 / 3.0
    }

    /// Flat index of `-k` for the wavenumber stored at `idx`.
    pub fn negated(&self, idx: usize) -> usize {
        self.inner.negated[idx]
    }

    /// Flat index of a wavenumber, or `None` when it is off the lattice or on a Nyquist row.
    pub fn index_of(&self, k: &[i32]) -> Option<usize> {
        if k.len() != self.dim() {
            return None;
        }
        let n = self.n() as i32;
        let half = n / 2;
        let mut idx = 0usize;
        for &c in k {
            if c < -half + 1 || c >= half {
                return None;
            }
            idx = idx * self.n() + c.rem_euclid(n) as usize;
        }
        Some(idx)
    }

    /// Physical coordinates of a flat index.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let n = self.n();
        let h = self.period() / n as f64;
        let mut x = [0.0; 3];
        let mut rem = idx;
        for axis in (0..self.dim()).rev() {
            x[axis] = (rem % n) as f64 * h;
            rem /= n;
        }
        x
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.dim() == other.dim() && self.n() == other.n())
    }

    /// Unnormalized forward transform in place: `F[k] = Σ_x f[x] e^{-ik·x}`.
    pub fn fft_forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.forward);
    }

    /// Unnormalized inverse transform in place: `f[x] = Σ_k F[k] e^{ik·x}`.
    pub fn fft_inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.inverse);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n();
        debug_assert_eq!(data.len(), self.len());
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        // Last axis is contiguous.
        plan.process_with_scratch(data, &mut scratch);

        // Remaining axes: transpose blocks of lines into a contiguous buffer.
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len()];
        for axis in (0..self.dim() - 1).rev() {
            let stride = n.pow((self.dim() - 1 - axis) as u32);
            let outer = self.len() / (n * stride);
            for o in 0..outer {
                let base = o * n * stride;
                let block = &mut buf[..n * stride];
                for i in 0..n {
                    for s in 0..stride {
                        block[s * n + i] = data[base + i * stride + s];
                    }
                }
                plan.process_with_scratch(block, &mut scratch);
                for i in 0..n {
                    for s in 0..stride {
                        data[base + i * stride + s] = block[s * n + i];
                    }
                }
            }
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim())
            .field("n", &self.n())
            .finish()
    }
}

/// Build a grid, rejecting unsupported dimensions and sizes.
pub fn make_grid(dim: usize, n: usize) -> Result<Grid> {
    Grid::new(dim, n)
}
