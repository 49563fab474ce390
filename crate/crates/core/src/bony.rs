//! Bony paraproducts, the remainder, and calibrated harnesses for the bilinear estimates.
//!
//! Every product is formed in physical space from dealiased factors and the sum
//! is truncated to the 2/3 ball once, which equals summing individually
//! dealiased products.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::{calibrate_and_assert, index_map, Calibration, EstimateReport};
use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::norms::{time_lp_norm, BandTable};
use crate::spectral::{
    dealiased_physical, lp_norm, multiply_dealiased, product_to_spectral, random_scalar, ScalarField, SpectrumShape,
};

const MEAN_TOL: f64 = 1e-12;

/// `T_g f`, `T_f g` and `R(f, g)`.
#[derive(Clone, Debug)]
pub struct BonySplit {
    pub t_gf: ScalarField,
    pub t_fg: ScalarField,
    pub remainder: ScalarField,
}

impl BonySplit {
    pub fn sum(&self) -> Result<ScalarField> {
        self.t_gf.add(&self.t_fg)?.add(&self.remainder)
    }
}

fn check_pair(f: &ScalarField, g: &ScalarField, part: &DyadicPartition) -> Result<()> {
    for h in [f, g] {
        if !h.grid().same_as(part.grid()) {
            return Err(Error::GridMismatch);
        }
        h.require_mean_free(MEAN_TOL)?;
    }
    Ok(())
}

fn sum_products(grid: &crate::spectral::Grid, products: Vec<Vec<f64>>) -> ScalarField {
    let mut acc = vec![0.0; grid.len()];
    for p in products {
        acc.iter_mut().zip(p).for_each(|(a, v)| *a += v);
    }
    product_to_spectral(grid, &acc)
}

fn band_physical(f: &ScalarField, m: &[f64]) -> Vec<f64> {
    dealiased_physical(&f.apply_multiplier(m))
}

/// `T_g f = Σ_j S_{j-1}g · Δ_j f`.
pub fn paraproduct(g: &ScalarField, f: &ScalarField, part: &DyadicPartition) -> Result<ScalarField> {
    check_pair(f, g, part)?;
    let bands: Vec<i32> = (part.j_min()..=part.j_max()).collect();
    let products = bands
        .par_iter()
        .map(|&j| {
            let low = band_physical(g, part.low_pass(j - 1)?);
            let high = band_physical(f, part.phi(crate::littlewood_paley::BandIndex(j))?);
            Ok(low.iter().zip(&high).map(|(a, b)| a * b).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(sum_products(part.grid(), products))
}

/// `R(f, g) = Σ_{|i-j| ≤ 1} Δ_i g · Δ_j f`.
pub fn remainder(f: &ScalarField, g: &ScalarField, part: &DyadicPartition) -> Result<ScalarField> {
    check_pair(f, g, part)?;
    let (lo, hi) = (part.j_min(), part.j_max());
    let phi = |j: i32| part.phi(crate::littlewood_paley::BandIndex(j));
    let products = (lo..=hi)
        .collect::<Vec<i32>>()
        .par_iter()
        .map(|&j| {
            let fj = band_physical(f, phi(j)?);
            let mut near = vec![0.0; fj.len()];
            for i in (j - 1).max(lo)..=(j + 1).min(hi) {
                near.iter_mut().zip(band_physical(g, phi(i)?)).for_each(|(a, v)| *a += v);
            }
            Ok(fj.iter().zip(&near).map(|(a, b)| a * b).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(sum_products(part.grid(), products))
}

/// `fg = T_g f + T_f g + R(f, g)` for mean-free fields supported in the covered annulus.
pub fn bony_decompose(f: &ScalarField, g: &ScalarField, part: &DyadicPartition) -> Result<BonySplit> {
    Ok(BonySplit {
        t_gf: paraproduct(g, f, part)?,
        t_fg: paraproduct(f, g, part)?,
        remainder: remainder(f, g, part)?,
    })
}

/// Relative L² defect `‖T_g f + T_f g + R(f,g) - fg‖₂ / ‖fg‖₂`.
pub fn reconstruction_defect(f: &ScalarField, g: &ScalarField, part: &DyadicPartition) -> Result<f64> {
    let split = bony_decompose(f, g, part)?;
    let direct = multiply_dealiased(f, g)?;
    let err = split.sum()?.sub(&direct)?.l2_norm();
    let scale = direct.l2_norm();
    Ok(if scale == 0.0 { err } else { err / scale })
}

/// Random test bank parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BankSpec {
    pub size: usize,
    pub n_times: usize,
    pub t_end: f64,
    /// Spectral slopes are drawn uniformly from `[slope_min, slope_max]`.
    pub slope_min: f64,
    pub slope_max: f64,
}

impl Default for BankSpec {
    fn default() -> Self {
        Self {
            size: 50,
            n_times: 6,
            t_end: 0.05,
            slope_min: -3.0,
            slope_max: 1.0,
        }
    }
}

/// Two heat-flow trajectories sampled on a shared uniform mesh.
#[derive(Clone, Debug)]
pub struct TrajectoryPair {
    pub times: Vec<f64>,
    pub u: Vec<ScalarField>,
    pub v: Vec<ScalarField>,
}

impl TrajectoryPair {
    /// Time-independent pair sampled at `times`.
    pub fn stationary(u: &ScalarField, v: &ScalarField, times: Vec<f64>) -> Self {
        let n = times.len();
        Self {
            times,
            u: vec![u.clone(); n],
            v: vec![v.clone(); n],
        }
    }
}

fn heat_samples(f0: &ScalarField, times: &[f64]) -> Vec<ScalarField> {
    let k2 = f0.grid().k_squared();
    times
        .iter()
        .map(|&t| {
            let m: Vec<f64> = k2.iter().map(|k| (-k * t).exp()).collect();
            f0.apply_multiplier(&m)
        })
        .collect()
}

/// Bank of heat-flow pairs from unit-L² random data supported in the partition's
/// covered annulus.
///
/// The two spectral slopes of element `i` are stratified over an `m × m` grid of
/// the slope square (`m = ⌈√size⌉`) with uniform jitter inside each cell, so
/// independent banks cover the slope range alike and differ only in their
/// random coefficients.
pub fn generate_bank<R: Rng + ?Sized>(rng: &mut R, part: &DyadicPartition, spec: &BankSpec) -> Result<Vec<TrajectoryPair>> {
    if spec.n_times < 2 || spec.t_end.is_nan() || spec.t_end <= 0.0 || spec.slope_min > spec.slope_max {
        return Err(Error::InvalidArgument("bank needs ≥ 2 times, t_end > 0, slope_min ≤ slope_max".into()));
    }
    let (k_lo, k_hi) = part.covered_annulus();
    let times: Vec<f64> = (0..spec.n_times)
        .map(|i| spec.t_end * i as f64 / (spec.n_times - 1) as f64)
        .collect();
    let m = (spec.size as f64).sqrt().ceil().max(1.0) as usize;
    let width = (spec.slope_max - spec.slope_min) / m as f64;
    let draw = |rng: &mut R, cell: usize| {
        let slope = spec.slope_min + width * (cell as f64 + rng.random::<f64>());
        let f = random_scalar(part.grid(), rng, SpectrumShape::new(k_lo, k_hi, slope));
        let n = f.l2_norm();
        f.scale(1.0 / n)
    };
    Ok((0..spec.size)
        .map(|i| {
            let u0 = draw(rng, i % m);
            let v0 = draw(rng, (i / m) % m);
            TrajectoryPair {
                u: heat_samples(&u0, &times),
                v: heat_samples(&v0, &times),
                times: times.clone(),
            }
        })
        .collect())
}

/// The bilinear inequalities with calibrated constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BilinearEstimate {
    /// `‖T_u v‖_{L̃^{q/2}Ḃ^s_{p,r}} ≤ C‖u‖_{L^q L^∞}‖v‖_{L̃^q Ḃ^s_{p,r}}`.
    ParaproductLinf { s: f64, p: f64, r: f64, q: f64 },
    /// `‖T_u v‖_{L̃^{q/2}Ḃ^{s1+s2}_{p,r}} ≤ C‖u‖_{L̃^q Ḃ^{s1}_{∞,r1}}‖v‖_{L̃^q Ḃ^{s2}_{p,r2}}`, `s1 < 0`.
    ParaproductNegative { s1: f64, s2: f64, p: f64, r1: f64, r2: f64, q: f64 },
    /// `‖R(u,v)‖_{L̃^{q/2}Ḃ^{s1+s2}_{p,r}} ≤ C‖u‖_{L̃^q Ḃ^{s1}_{p1,r1}}‖v‖_{L̃^q Ḃ^{s2}_{p2,r2}}`.
    Remainder { s1: f64, s2: f64, p1: f64, p2: f64, r1: f64, r2: f64, q: f64 },
    /// `‖uv‖_{L̃^{q/2}Ḃ^s_{p,r}} ≤ C(‖u‖_{L^qL^∞}‖v‖_{L̃^qḂ^s_{p,r}} + ‖u‖_{L̃^qḂ^s_{p,r}}‖v‖_{L^qL^∞})`.
    ProductLinf { s: f64, p: f64, r: f64, q: f64 },
    /// `‖uv‖_{L̃^{q/2}Ḃ^{n/p}_{p,1}} ≤ C‖u‖_{L̃^qḂ^{n/p}_{p,1}}‖v‖_{L̃^qḂ^{n/p}_{p,1}}`.
    ProductAlgebra { p: f64, q: f64 },
    /// Product into `Ḃ^{s1+s2-n(1/p1+1/p2-1/p)}_{p,r}` with `1/r = 1/r1 + 1/r2`.
    Product { s1: f64, s2: f64, p1: f64, p2: f64, p: f64, r1: f64, r2: f64, q: f64 },
}

fn inv(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

fn from_inv(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else {
        1.0 / x
    }
}

const EPS: f64 = 1e-12;

fn hyp(lemma: &'static str, detail: impl Into<String>) -> Error {
    Error::Hypothesis {
        lemma,
        detail: detail.into(),
    }
}

fn banach(lemma: &'static str, dim: usize, s: f64, p: f64, r: f64) -> Result<()> {
    let np = dim as f64 / p;
    if s < np - EPS || ((s - np).abs() <= EPS && r == 1.0) {
        Ok(())
    } else {
        Err(hyp(lemma, format!("Ḃ^{s}_{{{p},{r}}} is not complete: need s < n/p, or s = n/p with r = 1")))
    }
}

fn exps(lemma: &'static str, vals: &[f64], q: f64) -> Result<()> {
    if vals.iter().any(|v| v.is_nan() || *v < 1.0) {
        return Err(hyp(lemma, "integrability and summability indices must be ≥ 1"));
    }
    if q.is_nan() || q < 2.0 {
        return Err(hyp(lemma, format!("time exponent q = {q} must be ≥ 2")));
    }
    Ok(())
}

impl BilinearEstimate {
    pub fn lemma(&self) -> &'static str {
        match self {
            Self::ParaproductLinf { .. } => "Lemma 3.2 (1)",
            Self::ParaproductNegative { .. } => "Lemma 3.2 (2)",
            Self::Remainder { .. } => "Lemma 3.3",
            Self::ProductLinf { .. } => "Corollary 3.1",
            Self::ProductAlgebra { .. } => "Corollary 3.1 (algebra)",
            Self::Product { .. } => "Corollary 3.2",
        }
    }

    pub fn indices(&self) -> BTreeMap<String, f64> {
        match *self {
            Self::ParaproductLinf { s, p, r, q } | Self::ProductLinf { s, p, r, q } => {
                index_map(&[("s", s), ("p", p), ("r", r), ("q", q)])
            }
            Self::ParaproductNegative { s1, s2, p, r1, r2, q } => {
                index_map(&[("s1", s1), ("s2", s2), ("p", p), ("r1", r1), ("r2", r2), ("q", q)])
            }
            Self::Remainder { s1, s2, p1, p2, r1, r2, q } => index_map(&[
                ("s1", s1),
                ("s2", s2),
                ("p1", p1),
                ("p2", p2),
                ("r1", r1),
                ("r2", r2),
                ("q", q),
            ]),
            Self::ProductAlgebra { p, q } => index_map(&[("p", p), ("q", q)]),
            Self::Product { s1, s2, p1, p2, p, r1, r2, q } => index_map(&[
                ("s1", s1),
                ("s2", s2),
                ("p1", p1),
                ("p2", p2),
                ("p", p),
                ("r1", r1),
                ("r2", r2),
                ("q", q),
            ]),
        }
    }

    /// Checks the index hypotheses in dimension `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let lemma = self.lemma();
        let n = dim as f64;
        match *self {
            Self::ParaproductLinf { s, p, r, q } => {
                exps(lemma, &[p, r], q)?;
                banach(lemma, dim, s, p, r)
            }
            Self::ParaproductNegative { s1, s2, p, r1, r2, q } => {
                exps(lemma, &[p, r1, r2], q)?;
                if s1 >= 0.0 {
                    return Err(hyp(lemma, "need s1 < 0"));
                }
                if inv(r1) + inv(r2) > 1.0 + EPS {
                    return Err(hyp(lemma, "need 1/r1 + 1/r2 ≤ 1"));
                }
                banach(lemma, dim, s2, p, r2)
            }
            Self::Remainder { s1, s2, p1, p2, r1, r2, q } => {
                exps(lemma, &[p1, p2, r1, r2], q)?;
                let ip = inv(p1) + inv(p2);
                let ir = inv(r1) + inv(r2);
                if ip > 1.0 + EPS || ir > 1.0 + EPS {
                    return Err(hyp(lemma, "need 1/p = 1/p1 + 1/p2 ≤ 1 and 1/r = 1/r1 + 1/r2 ≤ 1"));
                }
                banach(lemma, dim, s1, p1, r1)?;
                banach(lemma, dim, s2, p2, r2)?;
                let sum = s1 + s2;
                let np = n * ip;
                let interior = sum > EPS && sum < np - EPS;
                let zero_end = sum.abs() <= EPS && (ir - 1.0).abs() <= EPS;
                let top_end = (sum - np).abs() <= EPS && (ir - 1.0).abs() <= EPS;
                if interior || zero_end || top_end {
                    Ok(())
                } else {
                    Err(hyp(
                        lemma,
                        "need 0 < s1 + s2 < n/p, or s1 + s2 = 0 with 1/r1 + 1/r2 = 1, or s1 + s2 = n/p with r = 1",
                    ))
                }
            }
            Self::ProductLinf { s, p, r, q } => {
                exps(lemma, &[p, r], q)?;
                if s <= 0.0 || s >= n / p {
                    return Err(hyp(lemma, "need 0 < s < n/p"));
                }
                Ok(())
            }
            Self::ProductAlgebra { p, q } => exps(lemma, &[p], q),
            Self::Product { s1, s2, p1, p2, p, r1, r2, q } => {
                exps(lemma, &[p1, p2, p, r1, r2], q)?;
                if s1 >= n / p1 || s2 >= n / p2 {
                    return Err(hyp(lemma, "need s_k < n/p_k"));
                }
                if inv(r1) + inv(r2) > 1.0 + EPS {
                    return Err(hyp(lemma, "need 1/r = 1/r1 + 1/r2 ≤ 1"));
                }
                if p < p1.max(p2) {
                    return Err(hyp(lemma, "need p ≥ max(p1, p2)"));
                }
                let gap = n * (inv(p1) + inv(p2) - inv(p));
                if s1 + s2 <= gap {
                    return Err(hyp(lemma, format!("need s1 + s2 > n(1/p1 + 1/p2 - 1/p) = {gap}")));
                }
                Ok(())
            }
        }
    }

    /// LHS / RHS on one trajectory pair.
    pub fn ratio(&self, pair: &TrajectoryPair, part: &DyadicPartition) -> Result<f64> {
        let dim = part.grid().dim();
        self.validate(dim)?;
        let n = dim as f64;
        let times = &pair.times;
        let cl = |traj: &[ScalarField], rho: f64, s: f64, p: f64, r: f64| -> Result<f64> {
            let samples: Vec<Vec<&ScalarField>> = traj.iter().map(|f| vec![f]).collect();
            BandTable::from_samples(&samples, times, p, part)?.chemin_lerner(rho, s, r)
        };
        let linf = |traj: &[ScalarField], rho: f64| -> Result<f64> {
            let vals = traj.iter().map(|f| lp_norm(f, f64::INFINITY)).collect::<Result<Vec<_>>>()?;
            time_lp_norm(&vals, times, rho)
        };
        let each = |op: &dyn Fn(&ScalarField, &ScalarField) -> Result<ScalarField>| -> Result<Vec<ScalarField>> {
            pair.u
                .iter()
                .zip(&pair.v)
                .map(|(u, v)| op(u, v).map(|w| w.without_mean()))
                .collect()
        };
        let (lhs, rhs) = match *self {
            Self::ParaproductLinf { s, p, r, q } => {
                let t = each(&|u, v| paraproduct(u, v, part))?;
                (cl(&t, q / 2.0, s, p, r)?, linf(&pair.u, q)? * cl(&pair.v, q, s, p, r)?)
            }
            Self::ParaproductNegative { s1, s2, p, r1, r2, q } => {
                let t = each(&|u, v| paraproduct(u, v, part))?;
                let r = from_inv(inv(r1) + inv(r2));
                (
                    cl(&t, q / 2.0, s1 + s2, p, r)?,
                    cl(&pair.u, q, s1, f64::INFINITY, r1)? * cl(&pair.v, q, s2, p, r2)?,
                )
            }
            Self::Remainder { s1, s2, p1, p2, r1, r2, q } => {
                let rem = each(&|u, v| remainder(u, v, part))?;
                let p = from_inv(inv(p1) + inv(p2));
                let r = if (s1 + s2).abs() <= EPS {
                    f64::INFINITY
                } else {
                    from_inv(inv(r1) + inv(r2))
                };
                (
                    cl(&rem, q / 2.0, s1 + s2, p, r)?,
                    cl(&pair.u, q, s1, p1, r1)? * cl(&pair.v, q, s2, p2, r2)?,
                )
            }
            Self::ProductLinf { s, p, r, q } => {
                let prod = each(&|u, v| multiply_dealiased(u, v))?;
                (
                    cl(&prod, q / 2.0, s, p, r)?,
                    linf(&pair.u, q)? * cl(&pair.v, q, s, p, r)? + cl(&pair.u, q, s, p, r)? * linf(&pair.v, q)?,
                )
            }
            Self::ProductAlgebra { p, q } => {
                let prod = each(&|u, v| multiply_dealiased(u, v))?;
                let s = n / p;
                (
                    cl(&prod, q / 2.0, s, p, 1.0)?,
                    cl(&pair.u, q, s, p, 1.0)? * cl(&pair.v, q, s, p, 1.0)?,
                )
            }
            Self::Product { s1, s2, p1, p2, p, r1, r2, q } => {
                let prod = each(&|u, v| multiply_dealiased(u, v))?;
                let s = s1 + s2 - n * (inv(p1) + inv(p2) - inv(p));
                let r = from_inv(inv(r1) + inv(r2));
                (
                    cl(&prod, q / 2.0, s, p, r)?,
                    cl(&pair.u, q, s1, p1, r1)? * cl(&pair.v, q, s2, p2, r2)?,
                )
            }
        };
        Ok(if lhs == 0.0 {
            0.0
        } else if rhs == 0.0 {
            f64::INFINITY
        } else {
            lhs / rhs
        })
    }
}

/// Ratios over a bank, evaluated in parallel.
pub fn estimate_ratios(bank: &[TrajectoryPair], est: &BilinearEstimate, part: &DyadicPartition) -> Result<Vec<f64>> {
    est.validate(part.grid().dim())?;
    bank.par_iter().map(|pair| est.ratio(pair, part)).collect()
}

/// Calibrates on `bank_a`, asserts on `bank_b`.
pub fn estimate_check(
    bank_a: &[TrajectoryPair],
    bank_b: &[TrajectoryPair],
    est: &BilinearEstimate,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<EstimateReport> {
    let a = estimate_ratios(bank_a, est, part)?;
    let b = estimate_ratios(bank_b, est, part)?;
    Ok(calibrate_and_assert(est.lemma(), est.indices(), &a, &b, cal))
}

fn require_family(est: &BilinearEstimate, ok: bool, family: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{} is not a {family} estimate", est.lemma())))
    }
}

pub fn paraproduct_estimate_check(
    bank_a: &[TrajectoryPair],
    bank_b: &[TrajectoryPair],
    est: &BilinearEstimate,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<EstimateReport> {
    let ok = matches!(est, BilinearEstimate::ParaproductLinf { .. } | BilinearEstimate::ParaproductNegative { .. });
    require_family(est, ok, "paraproduct")?;
    estimate_check(bank_a, bank_b, est, part, cal)
}

pub fn remainder_estimate_check(
    bank_a: &[TrajectoryPair],
    bank_b: &[TrajectoryPair],
    est: &BilinearEstimate,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<EstimateReport> {
    require_family(est, matches!(est, BilinearEstimate::Remainder { .. }), "remainder")?;
    estimate_check(bank_a, bank_b, est, part, cal)
}

pub fn product_estimate_check(
    bank_a: &[TrajectoryPair],
    bank_b: &[TrajectoryPair],
    est: &BilinearEstimate,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<EstimateReport> {
    let ok = matches!(
        est,
        BilinearEstimate::ProductLinf { .. } | BilinearEstimate::ProductAlgebra { .. } | BilinearEstimate::Product { .. }
    );
    require_family(est, ok, "product")?;
    estimate_check(bank_a, bank_b, est, part, cal)
}

/// The instance used for the nonlinear term: `s1 = s2 = s_p + 2/q`, `p1 = p2 = p`, `r1 = r2 = r`.
pub fn critical_product(dim: usize, p: f64, r: f64, q: f64) -> BilinearEstimate {
    let s = dim as f64 / p - 1.0 + 2.0 / q;
    BilinearEstimate::Product {
        s1: s,
        s2: s,
        p1: p,
        p2: p,
        p,
        r1: r,
        r2: r,
        q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::default_partition;
    use crate::spectral::make_grid;

    #[test]
    fn low_times_band_is_whole_product() {
        // |k| = 1 lives in bands {-1, 0}, |k| = 8 in bands {2, 3}; every S_{j-1} passes the low mode whole.
        let g = make_grid(2, 64).unwrap();
        let part = default_partition(&g).unwrap();
        let low = ScalarField::mode(&g, &[1, 0], 1.0, 0.0).unwrap();
        let high = ScalarField::mode(&g, &[0, 8], 1.0, 0.3).unwrap();
        let t_lh = paraproduct(&low, &high, &part).unwrap();
        let t_hl = paraproduct(&high, &low, &part).unwrap();
        let prod = multiply_dealiased(&low, &high).unwrap();
        assert!(t_lh.sub(&prod).unwrap().l2_norm() < 1e-14);
        assert!(t_hl.l2_norm() < 1e-15);
        assert!(remainder(&low, &high, &part).unwrap().l2_norm() < 1e-15);
    }

    #[test]
    fn zero_inputs() {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let z = ScalarField::zeros(&g);
        let f = ScalarField::mode(&g, &[2, 1], 1.0, 0.0).unwrap();
        let split = bony_decompose(&z, &f, &part).unwrap();
        assert_eq!(split.t_gf.l2_norm(), 0.0);
        assert_eq!(split.t_fg.l2_norm(), 0.0);
        assert_eq!(split.remainder.l2_norm(), 0.0);
        assert!(paraproduct(&ScalarField::constant(&g, 1.0), &f, &part).is_err());
    }

    #[test]
    fn index_hypotheses() {
        assert!(BilinearEstimate::ParaproductNegative { s1: 0.1, s2: 0.5, p: 2.0, r1: 2.0, r2: 2.0, q: 4.0 }
            .validate(2)
            .is_err());
        assert!(critical_product(2, 1.5, 2.0, 4.0).validate(2).is_ok());
        // p = 2 in 2D sits on the boundary s1 + s2 = n/p.
        assert!(critical_product(2, 2.0, 2.0, 4.0).validate(2).is_err());
        let rem = BilinearEstimate::Remainder { s1: 0.25, s2: -0.25, p1: 4.0, p2: 4.0, r1: 2.0, r2: 2.0, q: 4.0 };
        assert!(rem.validate(2).is_ok());
        let rem_bad = BilinearEstimate::Remainder { s1: 0.25, s2: -0.25, p1: 4.0, p2: 4.0, r1: 4.0, r2: 4.0, q: 4.0 };
        assert!(rem_bad.validate(2).is_err());
    }
}
