use serde::Serialize;

use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::mhd::pair_besov_norm;
use crate::norms::BesovSpec;
use crate::spectral::VectorField;

use super::calderon::{calderon_run, CalderonConfig};

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub scale: f64,
    pub data_norm: f64,
    /// `sup_t ‖(u, b)(t)‖_{Ḃ^{2/p-1}_{p,r}}` of the recombined solution.
    pub sup_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// Log-log slopes between consecutive scales.
    pub slopes: Vec<f64>,
    pub slopes_nondecreasing: bool,
    pub all_bounded: bool,
}

/// Runs the split pipeline for each multiple of the base data and tabulates solution size.
pub fn growth_monitor(
    scales: &[f64],
    base: (&VectorField, &VectorField),
    p: f64,
    r: f64,
    cfg: &CalderonConfig,
    part: &DyadicPartition,
) -> Result<GrowthReport> {
    if part.grid().dim() != 2 {
        return Err(Error::InvalidArgument("growth monitor is a 2D study".into()));
    }
    if !(p > 2.0 && p.is_finite() && r >= 1.0 && r.is_finite()) {
        return Err(Error::Hypothesis {
            lemma: "Theorem 1.3",
            detail: format!("needs 2 < p < ∞ and 1 ≤ r < ∞, got p = {p}, r = {r}"),
        });
    }
    let spec = BesovSpec::new(2.0 / p - 1.0, p, r)?;
    let mut rows = Vec::with_capacity(scales.len());
    for &scale in scales {
        let (u0, b0) = (base.0.scale(scale), base.1.scale(scale));
        let data_norm = pair_besov_norm(&u0, &b0, &spec, part)?;
        let run = calderon_run(&u0, &b0, cfg, part).map_err(|e| {
            Error::InvalidArgument(format!("growth run at scale {scale} failed: {e}"))
        })?;
        let sup_norm = run
            .sum
            .states()
            .iter()
            .map(|s| pair_besov_norm(&s.u, &s.b, &spec, part))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        rows.push(GrowthRow { scale, data_norm, sup_norm });
    }
    let slopes: Vec<f64> = rows
        .windows(2)
        .map(|w| (w[1].sup_norm / w[0].sup_norm).ln() / (w[1].data_norm / w[0].data_norm).ln())
        .collect();
    Ok(GrowthReport {
        all_bounded: rows.iter().all(|r| r.sup_norm.is_finite()),
        slopes_nondecreasing: slopes.windows(2).all(|w| w[1] >= w[0] - 1e-9),
        slopes,
        rows,
    })
}
