use copula_forge::madogram::{
    estimate_madogram, gen_missing_mask, monte_carlo_run, normality_diagnostics, true_madogram, MissingMask,
    MonteCarloConfig,
};
use copula_forge::{sample_unimargin, validate_params, CopulaSpec, Family, RngStream};

fn spec(f: Family, p: &[f64]) -> CopulaSpec {
    validate_params(f, p, 2).unwrap()
}

#[test]
fn full_data_estimates_converge() {
    let s = spec(Family::Gumbel, &[0.5]);
    let mut good = 0;
    for r in 0..40 {
        let m = sample_unimargin(&s, 10_000, &mut RngStream::new(r)).unwrap();
        let mask = MissingMask::full(10_000);
        let sup = (1..10)
            .map(|k| {
                let l = k as f64 / 10.0;
                (estimate_madogram(&m, &mask, l, false).unwrap() - true_madogram(&s, l).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        if sup <= 0.02 {
            good += 1;
        }
    }
    assert!(good >= 38, "{good} of 40 replications within 0.02");
}

#[test]
fn missing_completely_at_random_is_harmless() {
    let s = spec(Family::Gumbel, &[0.5]);
    let joe = spec(Family::Joe, &[2.0]);
    let mut diff = 0.0;
    let reps = 20;
    for r in 0..reps {
        let mut rng = RngStream::new(1_000 + r);
        let m = sample_unimargin(&s, 10_000, &mut rng).unwrap();
        let mask = gen_missing_mask(&mut rng, &joe, 0.9, 0.9, 10_000).unwrap();
        let full = estimate_madogram(&m, &MissingMask::full(10_000), 0.5, false).unwrap();
        diff += (estimate_madogram(&m, &mask, 0.5, false).unwrap() - full).abs();
    }
    assert!(diff / reps as f64 <= 0.01);
}

#[test]
fn independent_missingness_rate() {
    let ind = spec(Family::Gumbel, &[1.0]);
    let m = gen_missing_mask(&mut RngStream::new(5), &ind, 0.5, 0.5, 100_000).unwrap();
    assert!((m.p() - 0.25).abs() < 1e-15);
    assert!((m.complete_rate() - 0.25).abs() < 0.01);
}

#[test]
fn case_study_is_centred() {
    let cfg = MonteCarloConfig {
        n_iter: 300,
        n_sample: 1024,
        target: spec(Family::AsyNegLogistic, &[10.0, 0.1, 1.0]),
        miss: Some(spec(Family::Joe, &[2.0])),
        p0: 0.9,
        p1: 0.9,
        lambda: 0.5,
        corrected: true,
        seed: 42,
    };
    let recs = monte_carlo_run(&cfg).unwrap();
    assert_eq!(recs.len(), 300);
    let scaled: Vec<f64> = recs.iter().map(|r| r.scaled).collect();
    let d = normality_diagnostics(&scaled).unwrap();
    assert!(d.mean.abs() <= 3.0 * (d.variance / 300.0).sqrt(), "{d:?}");
}

#[test]
fn elliptical_missingness_has_no_closed_form_rate() {
    let g = spec(Family::Gaussian, &[0.5]);
    assert!(gen_missing_mask(&mut RngStream::new(1), &g, 0.9, 0.9, 10).is_err());
}
