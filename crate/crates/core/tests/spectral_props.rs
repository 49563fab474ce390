use bmhd_core::spectral::{
    divergence, leray_project, lp_norm, make_grid, random_scalar, random_solenoidal, ScalarField, SpectrumShape,
    VectorField,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vector(seed: u64, dim: usize, n: usize, slope: f64) -> VectorField {
    let g = make_grid(dim, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comps = (0..dim)
        .map(|_| random_scalar(&g, &mut rng, SpectrumShape::new(1.0, g.dealias_radius(), slope)))
        .collect();
    VectorField::from_components(comps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn physical_round_trip(seed in any::<u64>(), slope in -2.0f64..1.0, n in prop::sample::select(vec![16usize, 32, 64])) {
        let g = make_grid(2, n).unwrap();
        let f = random_scalar(&g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(1.0, n as f64, slope));
        let back = ScalarField::from_physical(&g, &f.to_physical()).unwrap();
        prop_assert!(back.sub(&f).unwrap().l2_norm() <= 1e-13 * f.l2_norm());
    }

    #[test]
    fn leray_idempotent_and_self_adjoint(seed in any::<u64>(), dim in 2usize..=3, slope in -2.0f64..0.5) {
        let n = if dim == 2 { 32 } else { 16 };
        let v = vector(seed, dim, n, slope);
        let w = vector(seed.wrapping_add(1), dim, n, slope);
        let pv = leray_project(&v);
        let scale = v.l2_norm() * w.l2_norm();
        prop_assert!(leray_project(&pv).sub(&pv).unwrap().l2_norm() <= 1e-12 * v.l2_norm());
        prop_assert!((pv.inner(&w) - v.inner(&leray_project(&w))).abs() <= 1e-12 * scale);
    }

    #[test]
    fn projected_fields_are_solenoidal(seed in any::<u64>(), dim in 2usize..=3) {
        let n = if dim == 2 { 32 } else { 16 };
        let v = vector(seed, dim, n, 0.0);
        let d = divergence(&leray_project(&v));
        prop_assert!(d.max_abs_coeff() <= 1e-12 * v.l2_norm());
    }

    #[test]
    fn parseval(seed in any::<u64>(), slope in -2.0f64..1.0) {
        let g = make_grid(2, 32).unwrap();
        let f = random_scalar(&g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(1.0, 10.0, slope));
        let coeff_sum: f64 = f.coeffs().iter().map(|z| z.norm_sqr()).sum();
        let l2 = lp_norm(&f, 2.0).unwrap();
        prop_assert!((l2 * l2 - coeff_sum).abs() <= 1e-12 * coeff_sum);
    }

    #[test]
    fn random_solenoidal_is_real_and_mean_free(seed in any::<u64>()) {
        let g = make_grid(2, 16).unwrap();
        let v = random_solenoidal(&g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(1.0, 5.0, -1.0));
        for c in v.components() {
            prop_assert_eq!(c.hermitian_defect(), 0.0);
            prop_assert_eq!(c.mean(), 0.0);
            prop_assert_eq!(c.nyquist_content(), 0.0);
        }
    }
}
