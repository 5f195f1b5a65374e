use bnls::globalizer::{growth_exponent, plan, rescale, RescaleLimits};
use bnls::rng::SeededRng;
use bnls::spectral::{lp_decompose, Dyadic};
use bnls::{Field2D, GridSpec, IMultiplier, Representation, C64};
use proptest::prelude::*;

fn band_limited(seed: u64, n: usize, kmax: f64) -> Field2D {
    let grid = GridSpec::torus(n).unwrap();
    let mut rng = SeededRng::new(seed);
    Field2D::from_spectrum(grid, |[a, b]| {
        let z = rng.complex_normal();
        if a.abs().max(b.abs()) <= kmax {
            z
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rescale_group_law_and_mass(seed in 0u64..1000, a in 0usize..3, b in 0usize..3) {
        let (l1, l2) = ([1.0, 2.0, 4.0][a], [1.0, 2.0, 4.0][b]);
        let f = band_limited(seed, 16, 4.0);
        let lim = RescaleLimits::default();
        let twice = rescale(&rescale(&f, l1, &lim).unwrap(), l2, &lim).unwrap();
        let once = rescale(&f, l1 * l2, &lim).unwrap();
        prop_assert!(twice.relative_l2_error(&once).unwrap() <= 1e-10);
        prop_assert!((once.l2_norm() / f.l2_norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn littlewood_paley_pieces_sum_to_the_field(seed in 0u64..1000, n in prop::sample::select(vec![16usize, 32, 64])) {
        let f = band_limited(seed, n, n as f64);
        let mut sum = Field2D::zeros(*f.grid(), Representation::Frequency);
        for p in lp_decompose(&f) {
            sum = sum.linear_combination(C64::new(1.0, 0.0), &p, C64::new(1.0, 0.0)).unwrap();
        }
        prop_assert!(sum.relative_l2_error(&f).unwrap() <= 1e-12);
    }

    #[test]
    fn multiplier_is_a_contraction(k in 1u32..8, s in 1.15f64..1.99, r in 0.0f64..1e4) {
        let m = IMultiplier::new(Dyadic::from_exponent(k), s).unwrap();
        let v = m.radial(r);
        prop_assert!(v > 0.0 && v <= 1.0);
        if r <= m.n() {
            prop_assert_eq!(v, 1.0);
        }
        prop_assert!(m.radial(r * 1.5) <= v + 1e-15);
    }

    #[test]
    fn plan_is_monotone(s in 1.15f64..1.99, t0 in 2.0f64..1e6, ds in 0.001f64..0.1) {
        // near 8/7 the cutoff overflows the dyadic range; that is reported, not a plan
        let (a, b) = (plan(s, t0, 1.0), plan(s, t0 * 4.0, 1.0));
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!(b.n >= a.n),
            (Ok(_), Err(e)) | (Err(e), _) => prop_assert!(matches!(e, bnls::Error::Resource(_))),
        }
        if s + ds < 2.0 {
            prop_assert!(growth_exponent(s + ds).unwrap() < growth_exponent(s).unwrap());
        }
    }
}
