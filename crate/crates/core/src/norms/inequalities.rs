//! Monte-Carlo checks of the Hölder, Young and convolution inequalities in Lorentz spaces.
//!
//! Test functions are nonnegative simple functions on the samples of a 2D grid
//! with the normalized measure. Convolutions are circular and computed exactly
//! with the raw FFT.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::lorentz::{lorentz_norm_uniform, LorentzSpec};
use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Relative slack before a ratio above the constant counts as a violation.
const SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub trials: usize,
    pub max_ratio: f64,
    pub constant: f64,
    pub violations: usize,
}

impl InequalityReport {
    fn from_ratios(name: &str, ratios: &[f64], constant: f64) -> Self {
        Self {
            name: name.into(),
            trials: ratios.len(),
            max_ratio: ratios.iter().cloned().fold(0.0, f64::max),
            constant,
            violations: ratios.iter().filter(|&&q| q > constant * (1.0 + SLACK)).count(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// Nonnegative simple function: up to 5 distinct positive levels on random sets, zero elsewhere.
pub fn random_simple_function<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    let levels: Vec<f64> = (0..rng.random_range(1..=5)).map(|_| rng.random_range(0.1..10.0)).collect();
    let zero_frac: f64 = rng.random_range(0.0..0.9);
    (0..len)
        .map(|_| {
            if rng.random::<f64>() < zero_frac {
                0.0
            } else {
                levels[rng.random_range(0..levels.len())]
            }
        })
        .collect()
}

/// `f ⋆ g (x) = ∫ f(x - y) g(y) dy` under the normalized measure, exact on the grid samples.
pub fn circular_convolution(grid: &Grid, f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    if f.len() != grid.len() || g.len() != grid.len() {
        return Err(Error::InvalidArgument("samples do not match the grid".into()));
    }
    let mut a: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut b: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.fft_forward(&mut a);
    grid.fft_forward(&mut b);
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
    grid.fft_inverse(&mut a);
    let scale = 1.0 / (grid.len() as f64 * grid.len() as f64);
    Ok(a.into_iter().map(|c| c.re * scale).collect())
}

/// Indices of the generalized Hölder inequality: `1/r = 1/p₁ + 1/p₂ < 1`, `1/q₁ + 1/q₂ ≥ 1/s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolderIndices {
    pub p1: f64,
    pub q1: f64,
    pub p2: f64,
    pub q2: f64,
    pub s: f64,
}

impl HolderIndices {
    pub fn validate(&self) -> Result<f64> {
        LorentzSpec::new(self.p1, self.q1)?;
        LorentzSpec::new(self.p2, self.q2)?;
        let inv_r = 1.0 / self.p1 + 1.0 / self.p2;
        if inv_r >= 1.0 {
            return Err(Error::Hypothesis {
                lemma: "generalized Hölder inequality",
                detail: format!("1/p1 + 1/p2 = {inv_r} must be < 1"),
            });
        }
        if self.s < 1.0 || recip(self.q1) + recip(self.q2) < recip(self.s) - 1e-12 {
            return Err(Error::Hypothesis {
                lemma: "generalized Hölder inequality",
                detail: "need s ≥ 1 and 1/q1 + 1/q2 ≥ 1/s".into(),
            });
        }
        Ok(1.0 / inv_r)
    }

    /// The constant `r'`.
    pub fn constant(&self) -> Result<f64> {
        let r = self.validate()?;
        Ok(r / (r - 1.0))
    }
}

/// `‖fg‖_{(r,s)} / (‖f‖_{(p₁,q₁)} ‖g‖_{(p₂,q₂)})`.
pub fn holder_ratio(f: &[f64], g: &[f64], idx: &HolderIndices) -> Result<f64> {
    let r = idx.validate()?;
    let fg: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
    let lhs = lorentz_norm_uniform(&fg, &LorentzSpec::new(r, idx.s)?)?;
    let rhs = lorentz_norm_uniform(f, &LorentzSpec::new(idx.p1, idx.q1)?)?
        * lorentz_norm_uniform(g, &LorentzSpec::new(idx.p2, idx.q2)?)?;
    Ok(ratio(lhs, rhs))
}

pub fn lorentz_holder_check<R: Rng + ?Sized>(
    rng: &mut R,
    idx: &HolderIndices,
    trials: usize,
    len: usize,
) -> Result<InequalityReport> {
    let c = idx.constant()?;
    let ratios = (0..trials)
        .map(|_| {
            let f = random_simple_function(rng, len);
            let g = random_simple_function(rng, len);
            holder_ratio(&f, &g, idx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityReport::from_ratios("lorentz_holder", &ratios, c))
}

/// Indices of the generalized Young inequality: `1/p₁ + 1/p₂ > 1`, `1/r = 1/p₁ + 1/p₂ - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YoungIndices {
    pub p1: f64,
    pub q1: f64,
    pub p2: f64,
    pub q2: f64,
    pub s: f64,
}

impl YoungIndices {
    pub fn validate(&self) -> Result<f64> {
        LorentzSpec::new(self.p1, self.q1)?;
        LorentzSpec::new(self.p2, self.q2)?;
        let sum = 1.0 / self.p1 + 1.0 / self.p2;
        if sum <= 1.0 {
            return Err(Error::Hypothesis {
                lemma: "generalized Young inequality",
                detail: format!("1/p1 + 1/p2 = {sum} must be > 1"),
            });
        }
        if self.s < 1.0 || recip(self.q1) + recip(self.q2) < recip(self.s) - 1e-12 {
            return Err(Error::Hypothesis {
                lemma: "generalized Young inequality",
                detail: "need s ≥ 1 and 1/q1 + 1/q2 ≥ 1/s".into(),
            });
        }
        Ok(1.0 / (sum - 1.0))
    }

    /// The constant `3r`.
    pub fn constant(&self) -> Result<f64> {
        Ok(3.0 * self.validate()?)
    }
}

pub fn young_ratio(grid: &Grid, f: &[f64], g: &[f64], idx: &YoungIndices) -> Result<f64> {
    let r = idx.validate()?;
    let h = circular_convolution(grid, f, g)?;
    let lhs = lorentz_norm_uniform(&h, &LorentzSpec::new(r, idx.s)?)?;
    let rhs = lorentz_norm_uniform(f, &LorentzSpec::new(idx.p1, idx.q1)?)?
        * lorentz_norm_uniform(g, &LorentzSpec::new(idx.p2, idx.q2)?)?;
    Ok(ratio(lhs, rhs))
}

pub fn lorentz_young_check<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &Grid,
    idx: &YoungIndices,
    trials: usize,
) -> Result<InequalityReport> {
    let c = idx.constant()?;
    let name = if idx.q1.is_infinite() && idx.q2.is_infinite() && idx.s.is_infinite() {
        "weak_young"
    } else {
        "lorentz_young"
    };
    let ratios = (0..trials)
        .map(|_| {
            let f = random_simple_function(rng, grid.len());
            let g = random_simple_function(rng, grid.len());
            young_ratio(grid, &f, &g, idx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityReport::from_ratios(name, &ratios, c))
}

/// Weak Young: all second indices infinite, checked against the same constant `3r`.
pub fn weak_young_check<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &Grid,
    p: f64,
    q: f64,
    trials: usize,
) -> Result<InequalityReport> {
    let inf = f64::INFINITY;
    let idx = YoungIndices { p1: p, q1: inf, p2: q, q2: inf, s: inf };
    lorentz_young_check(rng, grid, &idx, trials)
}

/// Indices of the `L^∞` convolution endpoint: `f ∈ L^{p,q₁}`, `g ∈ L^{p',q₂}`, `1/q₁ + 1/q₂ ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvIndices {
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
}

impl ConvIndices {
    pub fn validate(&self) -> Result<f64> {
        LorentzSpec::new(self.p, self.q1)?;
        if self.p.is_infinite() {
            return Err(Error::InvalidArgument("p must be finite".into()));
        }
        let dual = self.p / (self.p - 1.0);
        LorentzSpec::new(dual, self.q2)?;
        if recip(self.q1) + recip(self.q2) < 1.0 - 1e-12 {
            return Err(Error::Hypothesis {
                lemma: "Lorentz convolution inequality",
                detail: "need 1/q1 + 1/q2 ≥ 1".into(),
            });
        }
        Ok(dual)
    }
}

pub fn conv_endpoint_ratio(grid: &Grid, f: &[f64], g: &[f64], idx: &ConvIndices) -> Result<f64> {
    let dual = idx.validate()?;
    let h = circular_convolution(grid, f, g)?;
    let lhs = h.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let rhs = lorentz_norm_uniform(f, &LorentzSpec::new(idx.p, idx.q1)?)?
        * lorentz_norm_uniform(g, &LorentzSpec::new(dual, idx.q2)?)?;
    Ok(ratio(lhs, rhs))
}

pub fn conv_endpoint_check<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &Grid,
    idx: &ConvIndices,
    trials: usize,
) -> Result<InequalityReport> {
    idx.validate()?;
    let ratios = (0..trials)
        .map(|_| {
            let f = random_simple_function(rng, grid.len());
            let g = random_simple_function(rng, grid.len());
            conv_endpoint_ratio(grid, &f, &g, idx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityReport::from_ratios("lorentz_conv_endpoint", &ratios, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn holder_indicator_closed_form() {
        // f = g = 1_E with |E| = m: ‖1_E‖_{(2,1)} = 2 m^{1/2}, ‖1_E‖_{(4,2)} = √2 m^{1/4}.
        let len = 64;
        let f: Vec<f64> = (0..len).map(|i| if i < 16 { 1.0 } else { 0.0 }).collect();
        let idx = HolderIndices { p1: 4.0, q1: 2.0, p2: 4.0, q2: 2.0, s: 1.0 };
        let q = holder_ratio(&f, &f, &idx).unwrap();
        assert!((q - 1.0).abs() < 1e-14);
        assert_eq!(idx.constant().unwrap(), 2.0);
        assert_eq!(holder_ratio(&vec![0.0; len], &f, &idx).unwrap(), 0.0);
    }

    #[test]
    fn convolution_with_unit_peak_is_identity() {
        let g = make_grid(2, 16).unwrap();
        let f: Vec<f64> = (0..g.len()).map(|i| ((i * 13) % 7) as f64).collect();
        let mut peak = vec![0.0; g.len()];
        peak[0] = g.len() as f64;
        let h = circular_convolution(&g, &f, &peak).unwrap();
        for (a, b) in h.iter().zip(&f) {
            assert!((a - b).abs() < 1e-12);
        }
        // Shifted peak shifts f along the slow axis.
        let mut shifted = vec![0.0; g.len()];
        shifted[16] = g.len() as f64;
        let h = circular_convolution(&g, &f, &shifted).unwrap();
        assert!((h[16 + 3] - f[3]).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(HolderIndices { p1: 2.0, q1: 2.0, p2: 2.0, q2: 2.0, s: 1.0 }.validate().is_err());
        assert!(YoungIndices { p1: 2.0, q1: 2.0, p2: 2.0, q2: 2.0, s: 1.0 }.validate().is_err());
        assert!(ConvIndices { p: 2.0, q1: 4.0, q2: 4.0 }.validate().is_err());
    }

    #[test]
    fn small_random_suites_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = make_grid(2, 16).unwrap();
        let h = HolderIndices { p1: 3.0, q1: 2.0, p2: 4.0, q2: 3.0, s: 1.2 };
        assert!(lorentz_holder_check(&mut rng, &h, 20, 256).unwrap().passed());
        let y = YoungIndices { p1: 1.5, q1: 2.0, p2: 1.25, q2: 3.0, s: 1.2 };
        let rep = lorentz_young_check(&mut rng, &g, &y, 20).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let c = ConvIndices { p: 3.0, q1: 2.0, q2: 2.0 };
        assert!(conv_endpoint_check(&mut rng, &g, &c, 20).unwrap().passed());
    }
}
