//! Two-bank calibration for inequalities whose constants are not quantified.
//!
//! The constant is fixed from the largest ratio observed on bank A (times a
//! safety factor) unless one is supplied, then asserted on bank B.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Multiplier applied to the bank-A maximum.
    pub safety: f64,
    /// Largest accepted `|max_B / max_A - 1|`.
    pub max_drift: f64,
    /// Use this constant instead of calibrating.
    pub fixed: Option<f64>,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            safety: 1.25,
            max_drift: 0.2,
            fixed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub lemma: String,
    pub indices: BTreeMap<String, f64>,
    pub n_trials: usize,
    pub max_ratio: f64,
    pub calibration_constant: f64,
    pub bank_a_max: f64,
    pub drift: f64,
    pub passed: bool,
}

fn finite_max(r: &[f64]) -> f64 {
    r.iter().cloned().fold(0.0, f64::max)
}

/// Builds the report for ratios measured on two disjoint banks.
pub fn calibrate_and_assert(
    lemma: &str,
    indices: BTreeMap<String, f64>,
    bank_a: &[f64],
    bank_b: &[f64],
    cal: &Calibration,
) -> EstimateReport {
    let a = finite_max(bank_a);
    let b = finite_max(bank_b);
    let constant = cal.fixed.unwrap_or(cal.safety * a);
    let drift = if a == 0.0 && b == 0.0 {
        0.0
    } else if a == 0.0 {
        f64::INFINITY
    } else {
        (b / a - 1.0).abs()
    };
    let finite = bank_a.iter().chain(bank_b).all(|r| r.is_finite());
    EstimateReport {
        lemma: lemma.into(),
        indices,
        n_trials: bank_b.len(),
        max_ratio: b,
        calibration_constant: constant,
        bank_a_max: a,
        drift,
        passed: finite && b <= constant && (cal.fixed.is_some() || drift <= cal.max_drift),
    }
}

/// Index names and values as a sorted map.
pub fn index_map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn protocol_examples() {
        let cal = Calibration::default();
        let rep = calibrate_and_assert("x", index_map(&[("p", 2.0)]), &[1.0, 2.0], &[2.1, 0.5], &cal);
        assert_eq!(rep.calibration_constant, 2.5);
        assert!(rep.passed);
        assert!((rep.drift - 0.05).abs() < 1e-12);
        let bad = calibrate_and_assert("x", BTreeMap::new(), &[1.0], &[1.5], &cal);
        assert!(!bad.passed);
        let zero = calibrate_and_assert("x", BTreeMap::new(), &[0.0], &[0.0], &cal);
        assert!(zero.passed);
    }
}
