use bmhd_core::littlewood_paley::default_partition;
use bmhd_core::norms::{besov_norm, chemin_lerner_norm, iterated_norm, BesovSpec, MixedNormSpec};
use bmhd_core::spectral::{make_grid, random_scalar, Grid, ScalarField, SpectrumShape};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(g: &Grid, seed: u64, lo: f64, hi: f64, slope: f64) -> ScalarField {
    random_scalar(g, &mut ChaCha8Rng::seed_from_u64(seed), SpectrumShape::new(lo, hi, slope))
}

/// `f(2^m x)`: every mode k moves to 2^m k.
fn dilate(f: &ScalarField, m: u32) -> ScalarField {
    let g = f.grid();
    let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
    for (idx, c) in f.coeffs().iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let k = g.wavenumber(idx);
        let k2: Vec<i32> = k[..g.dim()].iter().map(|x| x << m).collect();
        out[g.index_of(&k2).expect("dilated mode on grid")] = *c;
    }
    ScalarField::from_coeffs(g, out).unwrap()
}

fn exponent() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn homogeneity_and_subadditivity(seed in any::<u64>(), s in -1.0f64..1.5, p in exponent(), r in exponent(), lam in -4.0f64..4.0) {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let (lo, hi) = part.covered_annulus();
        let spec = BesovSpec::new(s, p, r).unwrap();
        let f = field(&g, seed, lo, hi, -1.0);
        let h = field(&g, seed ^ 0xabcd, lo, hi, 0.0);
        let nf = besov_norm(&f, &spec, &part).unwrap();
        let nh = besov_norm(&h, &spec, &part).unwrap();
        let scaled = besov_norm(&f.scale(lam), &spec, &part).unwrap();
        prop_assert!((scaled - lam.abs() * nf).abs() <= 1e-12 * nf.max(1e-300) * lam.abs().max(1.0));
        let sum = besov_norm(&f.add(&h).unwrap(), &spec, &part).unwrap();
        prop_assert!(sum <= (nf + nh) * (1.0 + 1e-10));
    }

    #[test]
    fn monotone_in_r(seed in any::<u64>(), s in -1.0f64..1.5, p in exponent(), r1 in 1.0f64..6.0, dr in 0.0f64..4.0) {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let (lo, hi) = part.covered_annulus();
        let f = field(&g, seed, lo, hi, -0.5);
        let a = besov_norm(&f, &BesovSpec::new(s, p, r1).unwrap(), &part).unwrap();
        let b = besov_norm(&f, &BesovSpec::new(s, p, r1 + dr).unwrap(), &part).unwrap();
        let c = besov_norm(&f, &BesovSpec::new(s, p, f64::INFINITY).unwrap(), &part).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
        prop_assert!(c <= b * (1.0 + 1e-12));
    }

    #[test]
    fn dyadic_dilation(seed in any::<u64>(), s in -1.0f64..1.5, r in exponent()) {
        // p = 2 only: grid L^p of f(2x) samples f on every other point, exact via Parseval for p = 2.
        let g = make_grid(2, 64).unwrap();
        let part = default_partition(&g).unwrap();
        let spec = BesovSpec::new(s, 2.0, r).unwrap();
        let f = field(&g, seed, 1.0, 3.0, 0.0);
        let a = besov_norm(&f, &spec, &part).unwrap();
        let b = besov_norm(&dilate(&f, 1), &spec, &part).unwrap();
        prop_assert!((b - 2f64.powf(s) * a).abs() <= 1e-10 * b, "{} vs {}", b, 2f64.powf(s) * a);
    }

    #[test]
    fn chemin_lerner_against_iterated(seed in any::<u64>(), s in -0.5f64..1.0, p in exponent(), rho in 1.0f64..6.0, r in 1.0f64..6.0) {
        let g = make_grid(2, 32).unwrap();
        let part = default_partition(&g).unwrap();
        let (lo, hi) = part.covered_annulus();
        let n_t = 9;
        let times: Vec<f64> = (0..n_t).map(|i| i as f64 / (n_t - 1) as f64).collect();
        // Two fields with different time profiles, so neither ordering is tight.
        let a = field(&g, seed, lo, hi, -1.0);
        let b = field(&g, seed.wrapping_add(7), lo, hi, 0.5);
        let traj: Vec<ScalarField> = times
            .iter()
            .map(|t| a.scale((3.0 * t).cos()).add(&b.scale(t * t)).unwrap())
            .collect();
        let spec = MixedNormSpec::new(rho, BesovSpec::new(s, p, r).unwrap(), times).unwrap();
        let cl = chemin_lerner_norm(&traj, &spec, &part).unwrap();
        let it = iterated_norm(&traj, &spec, &part).unwrap();
        if rho <= r {
            prop_assert!(cl <= it * (1.0 + 1e-12), "rho {} r {}: {} > {}", rho, r, cl, it);
        } else {
            prop_assert!(it <= cl * (1.0 + 1e-12), "rho {} r {}: {} > {}", rho, r, it, cl);
        }
    }
}

#[test]
fn zero_has_zero_norm() {
    let g = make_grid(2, 32).unwrap();
    let part = default_partition(&g).unwrap();
    let spec = BesovSpec::new(0.5, 2.0, 2.0).unwrap();
    assert_eq!(besov_norm(&ScalarField::zeros(&g), &spec, &part).unwrap(), 0.0);
    assert!(BesovSpec::new(0.5, 0.5, 2.0).is_err());
}
