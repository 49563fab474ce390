use bmhd_core::experiments::{advection_integral, calderon_run, heat_trajectory, x_norm, CalderonConfig};
use bmhd_core::littlewood_paley::default_partition;
use bmhd_core::mhd::{integrate, pair_besov_norm, MHDState};
use bmhd_core::norms::BesovSpec;
use bmhd_core::spectral::{make_grid, random_solenoidal, Grid, SpectrumShape, VectorField};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sol(g: &Grid, seed: u64, slope: f64) -> VectorField {
    random_solenoidal(g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(1.0, g.dealias_radius(), slope))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn advection_cancellations(seed in any::<u64>(), dim in 2usize..=3) {
        let n = if dim == 2 { 32 } else { 16 };
        let g = make_grid(dim, n).unwrap();
        let h = sol(&g, seed, -1.0);
        let v = sol(&g, seed.wrapping_add(1), -0.5);
        let w = sol(&g, seed.wrapping_add(2), -1.5);
        let scale = h.l2_norm() * v.l2_norm() * w.l2_norm() * n as f64;
        prop_assert!(advection_integral(&h, &v, &v).unwrap().abs() <= 1e-12 * scale);
        let pair = advection_integral(&h, &w, &v).unwrap() + advection_integral(&h, &v, &w).unwrap();
        prop_assert!(pair.abs() <= 1e-12 * scale);
    }

    #[test]
    fn heat_x_norm_pieces(seed in any::<u64>(), amp in 0.1f64..10.0) {
        let g = make_grid(2, 32).unwrap();
        let v = sol(&g, seed, -1.0);
        let h = sol(&g, seed.wrapping_add(1), -1.0);
        let t_end = 1.0;
        let rep = x_norm(&heat_trajectory(&v, &h, t_end, 48).unwrap(), 2.0).unwrap();
        let scaled = x_norm(&heat_trajectory(&v.scale(amp), &h.scale(amp), t_end, 48).unwrap(), 2.0).unwrap();
        prop_assert!((scaled.total() - amp * rep.total()).abs() <= 1e-10 * amp * rep.total());
        // 2∫‖∇S(t)f‖² = ‖f‖² - ‖S(T)f‖², up to quadrature on the geometric mesh.
        let e0 = v.l2_norm_sq() + h.l2_norm_sq();
        let heat = heat_trajectory(&v, &h, t_end, 2).unwrap();
        let e_end = heat.last().energy();
        let exact = ((e0 - e_end) / 2.0).sqrt();
        prop_assert!((rep.x3 - exact).abs() <= 0.02 * exact, "{} vs {}", rep.x3, exact);
    }
}

#[test]
fn small_calderon_run_matches_direct_solve() {
    let g = make_grid(2, 32).unwrap();
    let part = default_partition(&g).unwrap();
    let (lo, hi) = part.covered_annulus();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sh = SpectrumShape::new(lo, hi, -2.0);
    let (u, b) = (random_solenoidal(&g, &mut rng, sh), random_solenoidal(&g, &mut rng, sh));
    let spec_bar = BesovSpec::new(-0.5, 4.0, 2.0).unwrap();
    let cfg = CalderonConfig {
        threshold: 0.3 * pair_besov_norm(&u, &b, &spec_bar, &part).unwrap(),
        spec_bar,
        dt: 2.5e-3,
        n_steps: 80,
        sample_every: 8,
    };
    let run = calderon_run(&u, &b, &cfg, &part).unwrap();
    let s = &run.split;
    assert!(s.v0.add(&s.w0).unwrap().sub(&u).unwrap().l2_norm() <= 1e-14 * u.l2_norm());
    assert!(s.g0.add(&s.h0).unwrap().sub(&b).unwrap().l2_norm() <= 1e-14 * b.l2_norm());
    assert!(s.tail_norm <= cfg.threshold);
    assert!(s.v0.l2_norm() > 0.0 && s.w0.l2_norm() > 0.0, "cut {} is not interior", s.cut);
    let direct = integrate(&MHDState::new(u, b, 0.0).unwrap(), cfg.dt, cfg.n_steps, cfg.sample_every).unwrap();
    assert_eq!(direct.len(), run.sum.len());
    for (a, d) in run.sum.states().iter().zip(direct.states()) {
        let err = a.sub(d).unwrap().l2_norm();
        assert!(err <= 1e-4 * d.l2_norm(), "t = {}: {err:e}", d.t);
    }
}
