use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::{calibrate_and_assert, index_map, Calibration, EstimateReport};
use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::mhd::{heat_propagate_vector, projected_divergence, TensorTerm};
use crate::norms::{time_lp_norm, trapezoid_weights, BandTable, BesovSpec};
use crate::spectral::{dealiased_physical, random_solenoidal, ScalarField, SpectrumShape, VectorField};

use super::FieldSeries;

/// `∫ ((a·∇)b)·c dx` by exact quadrature of the triple product.
pub fn advection_integral(a: &VectorField, b: &VectorField, c: &VectorField) -> Result<f64> {
    if !a.grid().same_as(b.grid()) || !a.grid().same_as(c.grid()) || a.dim() != b.dim() || a.dim() != c.dim() {
        return Err(Error::GridMismatch);
    }
    Ok(crate::mhd::advective_triple(a, b, c))
}

/// `T(a, b, c) = ∫_0^t ∫ (a·∇b)·c dx ds` with trapezoid time quadrature; `t` must be a sample time.
pub fn trilinear_form(a: &FieldSeries, b: &FieldSeries, c: &FieldSeries, t: f64) -> Result<f64> {
    for s in [b, c] {
        if s.times != a.times {
            return Err(Error::MeshMismatch("series sample different times".into()));
        }
    }
    let Some(m) = a.times.iter().position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0)) else {
        return Err(Error::MeshMismatch(format!("t = {t} is not a sample time")));
    };
    if m == 0 {
        return Ok(0.0);
    }
    let vals = (0..=m)
        .into_par_iter()
        .map(|i| advection_integral(&a.fields[i], &b.fields[i], &c.fields[i]))
        .collect::<Result<Vec<f64>>>()?;
    let w = trapezoid_weights(&a.times[..=m]);
    Ok(vals.iter().zip(&w).map(|(v, w)| v * w).sum())
}

/// `2 ≤ r < ∞`, `2 < σ < ∞`, `n/r + 2/σ > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrilinearIndices {
    pub r: f64,
    pub sigma: f64,
}

impl TrilinearIndices {
    pub fn validate(&self, dim: usize) -> Result<()> {
        let hyp = |detail: String| Error::Hypothesis { lemma: "Prop. 2.1", detail };
        if !(self.r >= 2.0 && self.r.is_finite()) {
            return Err(hyp(format!("needs 2 ≤ r < ∞, got r = {}", self.r)));
        }
        if !(self.sigma > 2.0 && self.sigma.is_finite()) {
            return Err(hyp(format!("needs 2 < σ < ∞, got σ = {}", self.sigma)));
        }
        if dim as f64 / self.r + 2.0 / self.sigma <= 1.0 {
            return Err(hyp(format!("needs n/r + 2/σ > 1, got {}", dim as f64 / self.r + 2.0 / self.sigma)));
        }
        Ok(())
    }

    /// `Ḃ^{n/r + 2/σ - 1}_{r,σ}`.
    pub fn c_space(&self, dim: usize) -> Result<BesovSpec> {
        BesovSpec::new(dim as f64 / self.r + 2.0 / self.sigma - 1.0, self.r, self.sigma)
    }
}

/// Right sides bounding `|T(a, b, c)|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum TrilinearBound {
    /// Sum of three interpolated products of energy norms times `‖c‖_{L^σ Ḃ}`.
    Product,
    /// `ε(‖∇a‖_{L²L²} + ‖∇b‖_{L²L²}) + ε⁻¹ ∫(‖a‖₂² + ‖b‖₂²)‖c‖^σ_Ḃ`.
    Split { eps: f64 },
    /// The split form with `b = a`.
    Diagonal { eps: f64 },
}

impl TrilinearBound {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Product => "Prop. 2.1 (product)",
            Self::Split { .. } => "Prop. 2.1 (split)",
            Self::Diagonal { .. } => "Prop. 2.1 (diagonal)",
        }
    }

    fn eps(&self) -> Option<f64> {
        match self {
            Self::Product => None,
            Self::Split { eps } | Self::Diagonal { eps } => Some(*eps),
        }
    }
}

/// Energy-type norms of one series.
struct EnergyNorms {
    linf_l2: f64,
    grad_l2l2: f64,
    l2_sq: Vec<f64>,
}

fn energy_norms(s: &FieldSeries) -> Result<EnergyNorms> {
    let l2_sq: Vec<f64> = s.fields.iter().map(VectorField::l2_norm_sq).collect();
    let grads: Vec<f64> = s
        .fields
        .iter()
        .map(|f| {
            let k2 = f.grid().k_squared();
            f.components()
                .iter()
                .map(|c| c.coeffs().iter().zip(k2).map(|(z, k)| k * z.norm_sqr()).sum::<f64>())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    Ok(EnergyNorms {
        linf_l2: l2_sq.iter().fold(0.0, |m: f64, v| m.max(v.sqrt())),
        grad_l2l2: time_lp_norm(&grads, &s.times, 2.0)?,
        l2_sq,
    })
}

fn besov_series(c: &FieldSeries, spec: &BesovSpec, part: &DyadicPartition) -> Result<Vec<f64>> {
    let samples: Vec<Vec<&ScalarField>> = c.fields.iter().map(|f| f.components().iter().collect()).collect();
    let t = BandTable::from_samples(&samples, &c.times, spec.p, part)?;
    (0..t.values.len())
        .map(|i| {
            Ok(crate::norms::lr_sum(
                t.values[i]
                    .iter()
                    .enumerate()
                    .map(|(b, a)| 2f64.powf((t.j_min + b as i32) as f64 * spec.s) * a),
                spec.r,
            ))
        })
        .collect()
}

/// `|T(a, b, c)|` at the last sample over the chosen right side.
pub fn trilinear_ratio(
    a: &FieldSeries,
    b: &FieldSeries,
    c: &FieldSeries,
    idx: &TrilinearIndices,
    bound: &TrilinearBound,
    part: &DyadicPartition,
) -> Result<f64> {
    let dim = part.grid().dim();
    idx.validate(dim)?;
    let b = if matches!(bound, TrilinearBound::Diagonal { .. }) { a } else { b };
    let t_end = *a.times.last().ok_or_else(|| Error::InvalidArgument("empty series".into()))?;
    let lhs = trilinear_form(a, b, c, t_end)?.abs();
    let spec = idx.c_space(dim)?;
    let cb = besov_series(c, &spec, part)?;
    let (ea, eb) = (energy_norms(a)?, energy_norms(b)?);
    let sigma = idx.sigma;
    let rhs = match bound.eps() {
        None => {
            let c_norm = time_lp_norm(&cb, &c.times, sigma)?;
            let th = 1.0 / sigma;
            let t1 = ea.linf_l2.powf(th) * ea.grad_l2l2.powf(1.0 - th) * eb.linf_l2.powf(th) * eb.grad_l2l2.powf(1.0 - th);
            let t2 = ea.grad_l2l2 * eb.linf_l2.powf(2.0 * th) * eb.grad_l2l2.powf(1.0 - 2.0 * th);
            let t3 = ea.linf_l2.powf(2.0 * th) * ea.grad_l2l2.powf(1.0 - 2.0 * th) * eb.grad_l2l2;
            (t1 + t2 + t3) * c_norm
        }
        Some(eps) => {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
            }
            let grad = if matches!(bound, TrilinearBound::Diagonal { .. }) {
                ea.grad_l2l2
            } else {
                ea.grad_l2l2 + eb.grad_l2l2
            };
            let weight: Vec<f64> = if matches!(bound, TrilinearBound::Diagonal { .. }) {
                ea.l2_sq.iter().zip(&cb).map(|(x, c)| x * c.powf(sigma)).collect()
            } else {
                ea.l2_sq.iter().zip(&eb.l2_sq).zip(&cb).map(|((x, y), c)| (x + y) * c.powf(sigma)).collect()
            };
            let w = trapezoid_weights(&c.times);
            eps * grad + weight.iter().zip(&w).map(|(v, w)| v * w).sum::<f64>() / eps
        }
    };
    Ok(if rhs > 0.0 { lhs / rhs } else if lhs == 0.0 { 0.0 } else { f64::INFINITY })
}

/// Three heat-flow series `(a, b, c)`.
#[derive(Clone, Debug)]
pub struct TrilinearTriple {
    pub a: FieldSeries,
    pub b: FieldSeries,
    pub c: FieldSeries,
}

fn heat_series(f0: &VectorField, times: &[f64]) -> FieldSeries {
    FieldSeries {
        times: times.to_vec(),
        fields: times.iter().map(|&t| heat_propagate_vector(f0, t).expect("t ≥ 0")).collect(),
    }
}

/// How the third field of a triple is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleDesign {
    /// `c` is an independent heat flow.
    #[default]
    Random,
    /// `c(t) ∝ Π P(a·∇)b(t)`, the direction maximizing `T` for fixed `a, b`;
    /// `Π` keeps the partition's coverage.
    Aligned,
    /// As `Aligned` with `b = a`, for the diagonal form.
    AlignedDiagonal,
}

/// Triples of heat flows from unit-L² solenoidal data with stratified slopes,
/// as in [`crate::bony::generate_bank`].
///
/// Random triples stratify all three slopes over a cube-root grid; aligned
/// ones stratify the slopes of `a` and `b` over a square-root grid and
/// rescale `c` to unit L² at `t = 0`.
pub fn generate_triples<R: Rng + ?Sized>(
    rng: &mut R,
    part: &DyadicPartition,
    size: usize,
    n_times: usize,
    t_end: f64,
    slopes: (f64, f64),
    design: TripleDesign,
) -> Result<Vec<TrilinearTriple>> {
    if n_times < 2 || !(t_end > 0.0) || slopes.0 > slopes.1 {
        return Err(Error::InvalidArgument("triples need ≥ 2 times, t_end > 0, ordered slopes".into()));
    }
    let (lo, hi) = part.covered_annulus();
    let times: Vec<f64> = (0..n_times).map(|i| t_end * i as f64 / (n_times - 1) as f64).collect();
    let m = match design {
        TripleDesign::Random => (size as f64).cbrt(),
        TripleDesign::Aligned => (size as f64).sqrt(),
        TripleDesign::AlignedDiagonal => size as f64,
    }
    .ceil()
    .max(1.0) as usize;
    let width = (slopes.1 - slopes.0) / m as f64;
    let mut draw = |cell: usize| {
        let slope = slopes.0 + width * (cell as f64 + rng.random::<f64>());
        let v = random_solenoidal(part.grid(), rng, SpectrumShape::new(lo, hi, slope));
        let n = v.l2_norm();
        heat_series(&v.scale(1.0 / n), &times)
    };
    let cut = part.low_pass(part.j_max() + 1)?;
    let aligned = |a: &FieldSeries, b: &FieldSeries| -> Result<FieldSeries> {
        let fields = a
            .fields
            .iter()
            .zip(&b.fields)
            .map(|(x, y)| Ok(advection_direction(x, y)?.apply_multiplier(cut)))
            .collect::<Result<Vec<VectorField>>>()?;
        let n = fields[0].l2_norm();
        let s = if n > 0.0 { 1.0 / n } else { 0.0 };
        Ok(FieldSeries {
            times: a.times.clone(),
            fields: fields.iter().map(|f| f.scale(s)).collect(),
        })
    };
    (0..size)
        .map(|i| match design {
            TripleDesign::Random => Ok(TrilinearTriple {
                a: draw(i % m),
                b: draw((i / m) % m),
                c: draw((i / (m * m)) % m),
            }),
            TripleDesign::Aligned => {
                let (a, b) = (draw(i % m), draw((i / m) % m));
                let c = aligned(&a, &b)?;
                Ok(TrilinearTriple { a, b, c })
            }
            TripleDesign::AlignedDiagonal => {
                let a = draw(i % m);
                let c = aligned(&a, &a)?;
                Ok(TrilinearTriple { b: a.clone(), a, c })
            }
        })
        .collect()
}

/// `P(a·∇)b` with the quadratic product dealiased.
fn advection_direction(a: &VectorField, b: &VectorField) -> Result<VectorField> {
    let pa: Vec<Vec<f64>> = a.components().iter().map(dealiased_physical).collect();
    let pb: Vec<Vec<f64>> = b.components().iter().map(dealiased_physical).collect();
    projected_divergence(a.grid(), &[TensorTerm { coef: 1.0, a: &pa, c: &pb }])
}

pub fn trilinear_bound_check(
    bank_a: &[TrilinearTriple],
    bank_b: &[TrilinearTriple],
    idx: &TrilinearIndices,
    bound: &TrilinearBound,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<EstimateReport> {
    idx.validate(part.grid().dim())?;
    let run = |bank: &[TrilinearTriple]| -> Result<Vec<f64>> {
        bank.par_iter()
            .map(|t| trilinear_ratio(&t.a, &t.b, &t.c, idx, bound, part))
            .collect()
    };
    let (a, b) = (run(bank_a)?, run(bank_b)?);
    let mut indices = index_map(&[("r", idx.r), ("sigma", idx.sigma)]);
    if let Some(eps) = bound.eps() {
        indices.insert("eps".into(), eps);
    }
    Ok(calibrate_and_assert(bound.name(), indices, &a, &b, cal))
}
