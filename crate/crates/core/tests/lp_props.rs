use bmhd_core::littlewood_paley::{decompose, default_partition, delta_j, BandIndex};
use bmhd_core::spectral::{gradient, lp_norm, magnitude_lp_norm, make_grid, random_scalar, ScalarField, SpectrumShape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn almost_orthogonality(seed in any::<u64>(), slope in -2.0f64..1.0) {
        let g = make_grid(2, 64).unwrap();
        let part = default_partition(&g).unwrap();
        let f = random_scalar(&g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(1.0, 21.0, slope));
        let bands = decompose(&f, &part).unwrap();
        for (a, fa) in part.bands().zip(&bands) {
            for b in part.bands() {
                if (a.0 - b.0).abs() >= 2 {
                    prop_assert_eq!(delta_j(fa, b, &part).unwrap().l2_norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn resolution_of_identity(seed in any::<u64>(), slope in -2.0f64..1.0, n in prop::sample::select(vec![32usize, 64, 128])) {
        let g = make_grid(2, n).unwrap();
        let part = default_partition(&g).unwrap();
        let (lo, hi) = part.covered_annulus();
        let f = random_scalar(&g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(lo, hi, slope));
        let mut sum = ScalarField::zeros(&g);
        for d in decompose(&f, &part).unwrap() {
            sum = sum.add(&d).unwrap();
        }
        prop_assert!(sum.sub(&f).unwrap().l2_norm() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn bernstein_bounds(seed in any::<u64>(), slope in -2.0f64..1.0, p in prop::sample::select(vec![2.0f64, 4.0])) {
        let g = make_grid(2, 64).unwrap();
        let part = default_partition(&g).unwrap();
        let f = random_scalar(&g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(1.0, 21.0, slope));
        for j in part.bands() {
            let d = delta_j(&f, j, &part).unwrap();
            let norm = lp_norm(&d, p).unwrap();
            if norm <= 1e-13 * f.l2_norm() {
                continue;
            }
            let grad = gradient(&d);
            let refs: Vec<&ScalarField> = grad.components().iter().collect();
            let ratio = magnitude_lp_norm(&refs, p).unwrap() / norm / 2f64.powi(j.0);
            prop_assert!((0.75..=8.0 / 3.0).contains(&ratio), "p = {}, j = {}, ratio {}", p, j.0, ratio);
        }
    }
}

#[test]
fn band_of_a_single_mode() {
    // |k| = 5 has φ(2^{-j}·5) > 0 only for j = 1, 2.
    let g = make_grid(2, 64).unwrap();
    let part = default_partition(&g).unwrap();
    let f = ScalarField::mode(&g, &[3, 4], 1.0, 0.3).unwrap();
    let live: Vec<i32> = part
        .bands()
        .filter(|&j| delta_j(&f, j, &part).unwrap().l2_norm() > 0.0)
        .map(|j| j.0)
        .collect();
    assert_eq!(live, vec![1, 2]);
    assert!(delta_j(&f, BandIndex(9), &part).is_err());
}
