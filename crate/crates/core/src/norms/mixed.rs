use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::besov::{band_lp_norms, lr_sum, BesovSpec};
use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::spectral::{check_exponent, ScalarField, VectorField};

/// Time exponent ρ, spatial Besov indices and the sample times of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedNormSpec {
    pub rho: f64,
    pub besov: BesovSpec,
    pub times: Vec<f64>,
}

impl MixedNormSpec {
    pub fn new(rho: f64, besov: BesovSpec, times: Vec<f64>) -> Result<Self> {
        let spec = Self { rho, besov, times };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent(self.rho)?;
        self.besov.validate()?;
        check_times(&self.times)
    }

    /// Uniform mesh of `n` samples on `[0, t_end]`.
    pub fn uniform(rho: f64, besov: BesovSpec, t_end: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("need at least 2 time samples".into()));
        }
        let times = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
        Self::new(rho, besov, times)
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::InvalidArgument("need at least 2 time samples".into()));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("sample times must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Trapezoid weights for the sample times.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = 0.5 * (times[i + 1] - times[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

/// `∫_{t_0}^{t_i} a(t) dt` at every sample, integrating the cubic through the
/// four samples nearest each interval (trapezoid when fewer than four).
pub fn cumulative_integral(values: &[f64], times: &[f64]) -> Vec<f64> {
    let n = times.len().min(values.len());
    let mut out = vec![0.0; n];
    if n < 4 {
        for i in 1..n {
            out[i] = out[i - 1] + 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
        }
        return out;
    }
    // Two-point Gauss is exact for the cubic.
    let g = 0.5 / 3f64.sqrt();
    for i in 0..n - 1 {
        let s = i.saturating_sub(1).min(n - 4);
        let (x, y) = (&times[s..s + 4], &values[s..s + 4]);
        let cubic = |t: f64| -> f64 {
            (0..4)
                .map(|a| {
                    let l: f64 = (0..4).filter(|&b| b != a).map(|b| (t - x[b]) / (x[a] - x[b])).product();
                    l * y[a]
                })
                .sum()
        };
        let (a, h) = (times[i], times[i + 1] - times[i]);
        let mid = a + 0.5 * h;
        out[i + 1] = out[i] + 0.5 * h * (cubic(mid - g * h) + cubic(mid + g * h));
    }
    out
}

/// `(∫ |a(t)|^ρ dt)^{1/ρ}` by the trapezoid rule on the samples; `ρ = ∞` gives the max.
pub fn time_lp_norm(values: &[f64], times: &[f64], rho: f64) -> Result<f64> {
    check_exponent(rho)?;
    check_times(times)?;
    if values.len() != times.len() {
        return Err(Error::MeshMismatch(format!(
            "{} values for {} sample times",
            values.len(),
            times.len()
        )));
    }
    let max = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if rho.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    let w = trapezoid_weights(times);
    let sum: f64 = values.iter().zip(&w).map(|(v, w)| w * (v.abs() / max).powf(rho)).sum();
    Ok(max * sum.powf(1.0 / rho))
}

/// Band norms `‖Δ_j f(t_i)‖_p` of a sampled trajectory; `values[i][j - j_min]`.
#[derive(Clone, Debug)]
pub struct BandTable {
    pub j_min: i32,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl BandTable {
    /// Each sample is a list of components measured jointly (pointwise Euclidean magnitude).
    pub fn from_samples(
        samples: &[Vec<&ScalarField>],
        times: &[f64],
        p: f64,
        part: &DyadicPartition,
    ) -> Result<Self> {
        check_times(times)?;
        if samples.len() != times.len() {
            return Err(Error::MeshMismatch(format!(
                "{} samples for {} sample times",
                samples.len(),
                times.len()
            )));
        }
        for comps in samples {
            for c in comps {
                c.require_mean_free(1e-12)?;
            }
        }
        let values = samples
            .par_iter()
            .map(|comps| band_lp_norms(comps, p, part))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            j_min: part.j_min(),
            times: times.to_vec(),
            values,
        })
    }

    pub fn band_count(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// `t ↦ ‖Δ_j f(t)‖_p` for band index offset `b = j - j_min`.
    pub fn band_series(&self, b: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[b]).collect()
    }

    /// Time norm per band first, then the weighted `l^r` sum.
    pub fn chemin_lerner(&self, rho: f64, s: f64, r: f64) -> Result<f64> {
        let per_band = (0..self.band_count())
            .map(|b| {
                let j = self.j_min + b as i32;
                Ok(2f64.powf(j as f64 * s) * time_lp_norm(&self.band_series(b), &self.times, rho)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(lr_sum(per_band, r))
    }

    /// Besov norm per sample first, then the time norm.
    pub fn iterated(&self, rho: f64, s: f64, r: f64) -> Result<f64> {
        let per_time: Vec<f64> = self
            .values
            .iter()
            .map(|row| {
                lr_sum(
                    row.iter()
                        .enumerate()
                        .map(|(b, &a)| 2f64.powf((self.j_min + b as i32) as f64 * s) * a),
                    r,
                )
            })
            .collect();
        time_lp_norm(&per_time, &self.times, rho)
    }
}

fn scalar_table(traj: &[ScalarField], spec: &MixedNormSpec, part: &DyadicPartition) -> Result<BandTable> {
    spec.validate()?;
    let samples: Vec<Vec<&ScalarField>> = traj.iter().map(|f| vec![f]).collect();
    BandTable::from_samples(&samples, &spec.times, spec.besov.p, part)
}

/// Chemin–Lerner norm `L̃^ρ(I; Ḃ^s_{p,r})` of a sampled scalar trajectory.
pub fn chemin_lerner_norm(traj: &[ScalarField], spec: &MixedNormSpec, part: &DyadicPartition) -> Result<f64> {
    let b = &spec.besov;
    scalar_table(traj, spec, part)?.chemin_lerner(spec.rho, b.s, b.r)
}

pub fn chemin_lerner_norm_vector(
    traj: &[VectorField],
    spec: &MixedNormSpec,
    part: &DyadicPartition,
) -> Result<f64> {
    spec.validate()?;
    let samples: Vec<Vec<&ScalarField>> = traj.iter().map(|v| v.components().iter().collect()).collect();
    let b = &spec.besov;
    BandTable::from_samples(&samples, &spec.times, b.p, part)?.chemin_lerner(spec.rho, b.s, b.r)
}

/// Iterated norm `L^ρ(I; Ḃ^s_{p,r})`.
pub fn iterated_norm(traj: &[ScalarField], spec: &MixedNormSpec, part: &DyadicPartition) -> Result<f64> {
    let b = &spec.besov;
    scalar_table(traj, spec, part)?.iterated(spec.rho, b.s, b.r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_integral_is_exact_on_cubics() {
        let t: Vec<f64> = (0..9).map(|i| 0.1 * i as f64 + 0.01 * (i * i) as f64).collect();
        let f: Vec<f64> = t.iter().map(|x| 1.0 - 2.0 * x + 3.0 * x * x * x).collect();
        let got = cumulative_integral(&f, &t);
        for (x, g) in t.iter().zip(&got) {
            let exact = x - x * x + 0.75 * x.powi(4);
            assert!((g - exact).abs() < 1e-14, "{g} {exact}");
        }
    }
    use crate::littlewood_paley::default_partition;
    use crate::norms::besov_norm;
    use crate::spectral::make_grid;

    #[test]
    fn trapezoid_examples() {
        let t = [0.0, 0.5, 1.0];
        assert_eq!(trapezoid_weights(&t), vec![0.25, 0.5, 0.25]);
        assert!((time_lp_norm(&[2.0, 2.0, 2.0], &t, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(time_lp_norm(&[1.0, 3.0, 2.0], &t, f64::INFINITY).unwrap(), 3.0);
        assert!(time_lp_norm(&[1.0, 2.0], &t, 2.0).is_err());
        assert!(time_lp_norm(&[1.0, 2.0], &[0.0, 0.0], 2.0).is_err());
    }

    #[test]
    fn constant_trajectory_factorizes() {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let f = ScalarField::from_fn(&g, |x| (2.0 * x[0]).sin() + 0.5 * (x[0] - 3.0 * x[1]).cos()).unwrap();
        let besov = BesovSpec::new(0.5, 2.0, 2.0).unwrap();
        let spec = MixedNormSpec::uniform(4.0, besov, 2.0, 9).unwrap();
        let traj = vec![f.clone(); 9];
        let cl = chemin_lerner_norm(&traj, &spec, &part).unwrap();
        let expect = 2f64.powf(0.25) * besov_norm(&f, &besov, &part).unwrap();
        assert!((cl - expect).abs() < 1e-13 * expect);
        let zero = vec![ScalarField::zeros(&g); 9];
        assert_eq!(chemin_lerner_norm(&zero, &spec, &part).unwrap(), 0.0);
    }

    #[test]
    fn equal_exponents_commute() {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let traj: Vec<ScalarField> = (0..5)
            .map(|i| {
                let a = 1.0 + i as f64;
                ScalarField::from_fn(&g, |x| a * x[0].cos() + (4.0 * x[1]).sin() / a).unwrap()
            })
            .collect();
        let spec = MixedNormSpec::uniform(3.0, BesovSpec::new(0.2, 2.0, 3.0).unwrap(), 1.0, 5).unwrap();
        let cl = chemin_lerner_norm(&traj, &spec, &part).unwrap();
        let it = iterated_norm(&traj, &spec, &part).unwrap();
        assert!((cl - it).abs() < 1e-13 * it);
        assert!(chemin_lerner_norm(&traj[..4], &spec, &part).is_err());
    }
}
