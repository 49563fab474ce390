use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lorentz indices `L^{p,q}` with `1 < p < ∞` (or `p = ∞` with `q = ∞`) and `1 ≤ q ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzSpec {
    pub p: f64,
    pub q: f64,
}

impl LorentzSpec {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let spec = Self { p, q };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.is_nan() || self.p <= 1.0 {
            return Err(Error::InvalidArgument(format!("Lorentz p must exceed 1, got {}", self.p)));
        }
        if self.q.is_nan() || self.q < 1.0 {
            return Err(Error::InvalidArgument(format!("Lorentz q must be ≥ 1, got {}", self.q)));
        }
        Ok(())
    }
}

/// `‖f‖_{(p,q)} = (∫ (t^{1/p} f*(t))^q dt/t)^{1/q}` on the exact step rearrangement of
/// weighted samples; `sup_t t^{1/p} f*(t)` when `q = ∞`.
///
/// The step `f* = v_i` on `(t_{i-1}, t_i]` contributes `v_i^q (p/q)(t_i^{q/p} - t_{i-1}^{q/p})`.
pub fn lorentz_norm(values: &[f64], weights: &[f64], spec: &LorentzSpec) -> Result<f64> {
    spec.validate()?;
    if values.len() != weights.len() {
        return Err(Error::InvalidArgument("values and weights differ in length".into()));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Lorentz samples".into()));
    }
    let mut steps: Vec<(f64, f64)> = values
        .iter()
        .zip(weights)
        .filter(|(v, w)| **v != 0.0 && **w > 0.0)
        .map(|(v, w)| (v.abs(), *w))
        .collect();
    if steps.is_empty() {
        return Ok(0.0);
    }
    steps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (p, q) = (spec.p, spec.q);
    let top = steps[0].0;
    let mut t = 0.0;
    if q.is_infinite() {
        // t^{1/p} v_i is increasing on each step, so the sup is reached at right endpoints.
        let mut best: f64 = 0.0;
        for &(v, w) in &steps {
            t += w;
            best = best.max(v * if p.is_infinite() { 1.0 } else { t.powf(1.0 / p) });
        }
        return Ok(best);
    }
    let e = q / p;
    let mut prev = 0.0;
    let mut sum = 0.0;
    for &(v, w) in &steps {
        t += w;
        let cur = t.powf(e);
        sum += (v / top).powf(q) * (cur - prev);
        prev = cur;
    }
    Ok(top * ((p / q) * sum).powf(1.0 / q))
}

/// Lorentz norm of grid samples under the normalized measure (each sample weighs `1/len`).
pub fn lorentz_norm_uniform(values: &[f64], spec: &LorentzSpec) -> Result<f64> {
    let w = vec![1.0 / values.len().max(1) as f64; values.len()];
    lorentz_norm(values, &w, spec)
}
