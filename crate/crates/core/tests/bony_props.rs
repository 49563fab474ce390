use bmhd_core::bony::{bony_decompose, paraproduct, reconstruction_defect, remainder};
use bmhd_core::littlewood_paley::{default_partition, delta_j, BandIndex};
use bmhd_core::spectral::{make_grid, multiply_dealiased, random_scalar, Grid, ScalarField, SpectrumShape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(g: &Grid, seed: u64, slope: f64) -> ScalarField {
    let part = default_partition(g).unwrap();
    let (lo, hi) = part.covered_annulus();
    random_scalar(g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(lo, hi, slope))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reconstruction(seed in any::<u64>(), s1 in -2.0f64..1.0, s2 in -2.0f64..1.0) {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let f = field(&g, seed, s1);
        let h = field(&g, seed.wrapping_add(1), s2);
        prop_assert!(reconstruction_defect(&f, &h, &part).unwrap() <= 1e-11);
    }

    #[test]
    fn bilinearity(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let f = field(&g, seed, -1.0);
        let g1 = field(&g, seed.wrapping_add(1), 0.0);
        let g2 = field(&g, seed.wrapping_add(2), -0.5);
        let mix = g1.scale(a).add(&g2.scale(b)).unwrap();
        let scale = f.l2_norm() * (a.abs() * g1.l2_norm() + b.abs() * g2.l2_norm()) + 1e-300;

        let lhs = paraproduct(&mix, &f, &part).unwrap();
        let rhs = paraproduct(&g1, &f, &part).unwrap().scale(a).add(&paraproduct(&g2, &f, &part).unwrap().scale(b)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().l2_norm() <= 1e-12 * scale);

        let lhs = paraproduct(&f, &mix, &part).unwrap();
        let rhs = paraproduct(&f, &g1, &part).unwrap().scale(a).add(&paraproduct(&f, &g2, &part).unwrap().scale(b)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().l2_norm() <= 1e-12 * scale);

        let lhs = remainder(&f, &mix, &part).unwrap();
        let rhs = remainder(&f, &g1, &part).unwrap().scale(a).add(&remainder(&f, &g2, &part).unwrap().scale(b)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().l2_norm() <= 1e-12 * scale);
    }

    #[test]
    fn paraproduct_pieces_stay_near_their_band(seed in any::<u64>()) {
        // Δ_j(S_{k-1} g · Δ_k f) = 0 whenever |j - k| ≥ 5.
        let grid = make_grid(2, 128).unwrap();
        let part = default_partition(&grid).unwrap();
        let f = field(&grid, seed, -0.5);
        let g = field(&grid, seed.wrapping_add(3), -0.5);
        for k in part.bands() {
            let low = g.apply_multiplier(part.low_pass(k.0 - 1).unwrap());
            let piece = multiply_dealiased(&low, &delta_j(&f, k, &part).unwrap()).unwrap();
            for j in part.bands().filter(|j| (j.0 - k.0).abs() >= 5) {
                prop_assert!(delta_j(&piece, j, &part).unwrap().max_abs_coeff() <= 1e-15 * f.l2_norm() * g.l2_norm());
            }
        }
    }
}

#[test]
fn split_of_band_limited_pair() {
    // Two well separated bands: the low one is all paraproduct coefficient, no remainder.
    let g = make_grid(2, 128).unwrap();
    let part = default_partition(&g).unwrap();
    let low = ScalarField::mode(&g, &[1, 0], 1.0, 0.0).unwrap();
    let high = delta_j(&ScalarField::mode(&g, &[0, 20], 1.0, 0.2).unwrap(), BandIndex(3), &part).unwrap();
    let split = bony_decompose(&high, &low, &part).unwrap();
    assert!(split.remainder.l2_norm() <= 1e-14);
    assert!(split.t_fg.l2_norm() <= 1e-14);
    assert!(split.t_gf.sub(&multiply_dealiased(&high, &low).unwrap()).unwrap().l2_norm() <= 1e-13);
}
