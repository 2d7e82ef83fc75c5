use copula_forge::extreme::{pickands2, stdf};
use copula_forge::madogram::{pickands_from_madogram, true_madogram};
use copula_forge::stats::spearman_rho;
use copula_forge::{apply_margins, cond_cdf, copula_cdf, sample_unimargin, validate_params, Family, Quantile, RngStream};
use proptest::prelude::*;

fn extreme_family() -> impl Strategy<Value = (Family, Vec<f64>)> {
    prop_oneof![
        (0.05f64..1.0).prop_map(|t| (Family::Gumbel, vec![t])),
        (0.1f64..5.0).prop_map(|t| (Family::Galambos, vec![t])),
        (1.0f64..5.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(t, a, b)| (Family::AsyLogistic, vec![t, a, b])),
        (0.1f64..10.0, 0.05f64..1.0, 0.05f64..1.0).prop_map(|(t, a, b)| (Family::AsyNegLogistic, vec![t, a, b])),
        (0.1f64..4.0).prop_map(|t| (Family::HuslerReiss, vec![t])),
        (-0.9f64..0.9, 0.2f64..5.0).prop_map(|(r, v)| (Family::TEv, vec![r, v])),
        (0.05f64..0.95, 0.05f64..0.95).prop_map(|(a, b)| (Family::Bilogistic, vec![a, b])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pickands_within_bounds((f, p) in extreme_family(), w in 0.0f64..=1.0) {
        let s = validate_params(f, &p, 2).unwrap();
        let a = pickands2(&s, w).unwrap();
        prop_assert!(a >= w.max(1.0 - w) - 1e-12 && a <= 1.0 + 1e-12);
    }

    #[test]
    fn stdf_is_homogeneous((f, p) in extreme_family(), x0 in 0.01f64..10.0, x1 in 0.01f64..10.0, k in 0.1f64..10.0) {
        let s = validate_params(f, &p, 2).unwrap();
        let l = stdf(&s, &[x0, x1]).unwrap();
        prop_assert!((stdf(&s, &[k * x0, k * x1]).unwrap() - k * l).abs() <= 1e-10 * k.max(1.0) * l);
    }

    #[test]
    fn madogram_inversion_round_trip((f, p) in extreme_family(), l in 0.02f64..0.98) {
        let s = validate_params(f, &p, 2).unwrap();
        let a = pickands_from_madogram(true_madogram(&s, l).unwrap(), l).unwrap();
        prop_assert!((a - pickands2(&s, l).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn conditional_cdf_nondecreasing((f, p) in extreme_family(), u0 in 0.01f64..0.99, a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let s = validate_params(f, &p, 2).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(cond_cdf(&s, u0, lo).unwrap() <= cond_cdf(&s, u0, hi).unwrap() + 1e-12);
    }

    #[test]
    fn archimedean_cdf_within_frechet_bounds(t in 0.1f64..20.0, u0 in 0.001f64..1.0, u1 in 0.001f64..1.0) {
        for f in [Family::Clayton, Family::Frank, Family::Joe] {
            let th = if f == Family::Joe { 1.0 + t } else { t };
            let s = validate_params(f, &[th], 2).unwrap();
            let c = copula_cdf(&s, &[u0, u1]).unwrap();
            prop_assert!(c >= (u0 + u1 - 1.0).max(0.0) - 1e-12 && c <= u0.min(u1) + 1e-12);
        }
    }

    #[test]
    fn margins_preserve_spearman(seed in 0u64..1_000) {
        let s = validate_params(Family::Clayton, &[2.0], 2).unwrap();
        let u = sample_unimargin(&s, 200, &mut RngStream::new(seed)).unwrap();
        let x = apply_margins(&u, &[Quantile::StdNormal, Quantile::StdExponential]).unwrap();
        let before = spearman_rho(&u.column(0), &u.column(1));
        let after = spearman_rho(&x.column(0), &x.column(1));
        prop_assert!((before - after).abs() <= 1e-12);
    }
}
