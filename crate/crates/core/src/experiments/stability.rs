use serde::Serialize;

use crate::calibration::Calibration;
use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::mhd::{integrate, pair_besov_norm, MHDState, Trajectory};
use crate::norms::BesovSpec;
use crate::spectral::make_grid;

fn check_mesh(a: &Trajectory, b: &Trajectory) -> Result<()> {
    if !a.grid().same_as(b.grid()) {
        return Err(Error::GridMismatch);
    }
    let (ta, tb) = (a.times(), b.times());
    if ta.len() != tb.len() || ta.iter().zip(&tb).any(|(x, y)| (x - y).abs() > 1e-12 * x.abs().max(1.0)) {
        return Err(Error::MeshMismatch("trajectories sample different times".into()));
    }
    Ok(())
}

/// `∫_0^{t_i} ‖(u, b)‖^r_{Ḃ^s_{p,r}} ds` at every sample, trapezoid rule.
pub fn gronwall_weight(traj: &Trajectory, spec: &BesovSpec, part: &DyadicPartition) -> Result<Vec<f64>> {
    let vals: Vec<f64> = traj
        .states()
        .iter()
        .map(|s| Ok(pair_besov_norm(&s.u, &s.b, spec, part)?.powf(spec.r)))
        .collect::<Result<_>>()?;
    let t = traj.times();
    let mut out = vec![0.0; t.len()];
    for i in 1..t.len() {
        out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (vals[i] + vals[i - 1]);
    }
    Ok(out)
}

/// `‖(v, g)(t)‖₂² + ∫_0^t ‖∇(v, g)‖₂²` at every sample.
fn energy_lhs(diff: &[MHDState]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(diff.len());
    for (i, s) in diff.iter().enumerate() {
        if i > 0 {
            acc += 0.5 * (s.t - diff[i - 1].t) * (s.dissipation() + diff[i - 1].dissipation());
        }
        out.push(s.energy() + acc);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakStrongReport {
    pub times: Vec<f64>,
    pub lhs: Vec<f64>,
    pub weight: Vec<f64>,
    pub rhs: Vec<f64>,
    pub constant: f64,
    /// Smallest constant for which every sample satisfies the bound.
    pub c_needed: f64,
    pub initial_gap: f64,
    pub passed: bool,
}

/// The difference `(v, g) = strong - weak` against `exp(C ∫‖(u, b)‖^r_{Ḃ^{n/p+2/r-1}_{p,r}}) ‖(v_0, g_0)‖₂²`.
pub fn weak_strong_gap(
    strong: &Trajectory,
    weak: &Trajectory,
    p: f64,
    r: f64,
    constant: f64,
    part: &DyadicPartition,
) -> Result<WeakStrongReport> {
    let n = strong.grid().dim() as f64;
    if !(p >= 1.0 && p.is_finite()) || !(r > 2.0 && r.is_finite()) || n / (2.0 * p) + 2.0 / r <= 1.0 {
        return Err(Error::Hypothesis {
            lemma: "Prop. 3.2",
            detail: format!("needs 1 ≤ p < ∞, 2 < r < ∞, n/(2p) + 2/r > 1; got p = {p}, r = {r}"),
        });
    }
    check_mesh(strong, weak)?;
    let spec = BesovSpec::new(n / p + 2.0 / r - 1.0, p, r)?;
    let diff: Vec<MHDState> = strong
        .states()
        .iter()
        .zip(weak.states())
        .map(|(a, b)| a.sub(b))
        .collect::<Result<_>>()?;
    let lhs = energy_lhs(&diff);
    let weight = gronwall_weight(strong, &spec, part)?;
    let gap0 = diff[0].energy();
    let rhs: Vec<f64> = weight.iter().map(|w| (constant * w).exp() * gap0).collect();
    let mut c_needed: f64 = 0.0;
    for (l, w) in lhs.iter().zip(&weight).skip(1) {
        if *l > gap0 {
            c_needed = c_needed.max(if gap0 > 0.0 && *w > 0.0 { (l / gap0).ln() / w } else { f64::INFINITY });
        }
    }
    let passed = lhs.iter().zip(&rhs).all(|(l, r)| *l <= r * (1.0 + 1e-12) + 1e-300);
    Ok(WeakStrongReport {
        times: strong.times(),
        lhs,
        weight,
        rhs,
        constant,
        c_needed,
        initial_gap: gap0,
        passed,
    })
}

/// Calibrates the constant on pair A (`safety × c_needed`, or the fixed value) and asserts on pair B.
pub fn weak_strong_check(
    pair_a: (&Trajectory, &Trajectory),
    pair_b: (&Trajectory, &Trajectory),
    p: f64,
    r: f64,
    part: &DyadicPartition,
    cal: &Calibration,
) -> Result<WeakStrongReport> {
    let a = weak_strong_gap(pair_a.0, pair_a.1, p, r, 0.0, part)?;
    let c = cal.fixed.unwrap_or(cal.safety * a.c_needed);
    weak_strong_gap(pair_b.0, pair_b.1, p, r, c, part)
}

/// Coarse, coarse-stepped run of the same data, prolonged spectrally to the fine grid.
///
/// Runs on an `n_coarse` grid with step `dt` for `n_steps`, sampling every `sample_every`.
pub fn weak_surrogate(
    data: &MHDState,
    n_coarse: usize,
    dt: f64,
    n_steps: usize,
    sample_every: usize,
) -> Result<Trajectory> {
    let fine = data.grid().clone();
    let coarse = make_grid(fine.dim(), n_coarse)?;
    let start = data.resample(&coarse)?;
    let run = integrate(&start, dt, n_steps, sample_every)?;
    Trajectory::new(
        run.into_states()
            .into_iter()
            .map(|s| s.resample(&fine))
            .collect::<Result<Vec<_>>>()?,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct GronwallReport {
    /// `sup_t (‖(v, g)(t)‖₂² + ∫_0^t ‖∇(v, g)‖₂²) / ‖(v_0, g_0)‖₂²`.
    pub ratio: f64,
    /// `∫_0^T ‖(w, h)‖^r_{Ḃ^{2/p+2/r-1}_{p,r}}`.
    pub weight: f64,
    pub constant: f64,
    pub passed: bool,
}

/// Uniform energy bound for `(v, g)` against `C ‖(v_0, g_0)‖₂²`.
pub fn gronwall_energy_check(
    vg: &Trajectory,
    wh: &Trajectory,
    p: f64,
    r: f64,
    constant: f64,
    part: &DyadicPartition,
) -> Result<GronwallReport> {
    if vg.grid().dim() != 2 {
        return Err(Error::InvalidArgument("the energy bound is a 2D statement".into()));
    }
    if !(p >= 1.0 && r >= 1.0 && p.is_finite() && r.is_finite()) || 2.0 / p + 2.0 / r <= 1.0 {
        return Err(Error::Hypothesis {
            lemma: "Lemma 4.1",
            detail: format!("needs 2/p + 2/r > 1, got p = {p}, r = {r}"),
        });
    }
    check_mesh(vg, wh)?;
    let lhs = energy_lhs(vg.states());
    let e0 = vg.first().energy();
    let sup = lhs.iter().cloned().fold(0.0, f64::max);
    let ratio = if e0 > 0.0 { sup / e0 } else if sup == 0.0 { 0.0 } else { f64::INFINITY };
    let spec = BesovSpec::new(2.0 / p + 2.0 / r - 1.0, p, r)?;
    let weight = *gronwall_weight(wh, &spec, part)?.last().expect("nonempty");
    Ok(GronwallReport {
        ratio,
        weight,
        constant,
        passed: ratio.is_finite() && ratio <= constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::default_partition;
    use crate::spectral::{random_solenoidal, SpectrumShape, VectorField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run(seed: u64, amp: f64) -> Trajectory {
        let g = crate::spectral::make_grid(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sh = SpectrumShape::new(1.0, 3.0, 0.0);
        let u = random_solenoidal(&g, &mut rng, sh);
        let b = random_solenoidal(&g, &mut rng, sh);
        let (u, b) = (u.scale(amp / u.l2_norm()), b.scale(amp / b.l2_norm()));
        integrate(&MHDState::new(u, b, 0.0).unwrap(), 0.01, 20, 2).unwrap()
    }

    #[test]
    fn identical_runs_have_no_gap() {
        let a = run(1, 0.5);
        let part = default_partition(a.grid()).unwrap();
        let rep = weak_strong_gap(&a, &a, 2.0, 3.0, 1.0, &part).unwrap();
        assert!(rep.passed);
        assert!(rep.lhs.iter().all(|&l| l == 0.0));
        assert!(weak_strong_gap(&a, &a, 2.0, 2.0, 1.0, &part).is_err());
    }

    #[test]
    fn zero_strong_solution_is_the_energy_inequality() {
        let weak = run(2, 0.5);
        let g = weak.grid().clone();
        let zero = Trajectory::new(
            weak.times()
                .into_iter()
                .map(|t| MHDState::unchecked(VectorField::zeros(&g), VectorField::zeros(&g), t))
                .collect(),
        )
        .unwrap();
        let part = default_partition(&g).unwrap();
        let rep = weak_strong_gap(&zero, &weak, 2.0, 3.0, 5.0, &part).unwrap();
        assert!(rep.rhs.iter().all(|&r| r == rep.initial_gap));
        assert!(rep.passed);
    }

    #[test]
    fn gronwall_without_coefficients() {
        let vg = run(3, 0.3);
        let g = vg.grid().clone();
        let wh = Trajectory::new(
            vg.times()
                .into_iter()
                .map(|t| MHDState::unchecked(VectorField::zeros(&g), VectorField::zeros(&g), t))
                .collect(),
        )
        .unwrap();
        let part = default_partition(&g).unwrap();
        let rep = gronwall_energy_check(&vg, &wh, 4.0, 2.0, 1.01, &part).unwrap();
        assert_eq!(rep.weight, 0.0);
        assert!(rep.passed && rep.ratio <= 1.0 + 1e-6, "{rep:?}");
        assert!(gronwall_energy_check(&vg, &wh, 4.0, 4.0, 1.0, &part).is_err());
    }
}
