//! Analytic property checks for generators, Pickands functions and the
//! elliptical distribution functions, reported with their worst deviation.

use serde::Serialize;

use crate::archimedean::Generator;
use crate::error::{Error, Result};
use crate::extreme::pickands;
use crate::linalg::cholesky;
use crate::rng::RngStream;
use crate::sampling::{copula_cdf, sample_unimargin};
use crate::spec::{CopulaSpec, Params};
use crate::special::{norm_cdf, norm_quantile, student_cdf, student_quantile};
use crate::stats::ks_uniform;

/// Outcome of one property check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub subject: String,
    pub property: String,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
}

impl PropertyReport {
    fn new(subject: &str, property: &str, worst: f64, tolerance: f64) -> Self {
        Self {
            subject: subject.into(),
            property: property.into(),
            passed: worst <= tolerance,
            worst,
            tolerance,
        }
    }
}

/// Finite-difference step used for derivative checks.
const FD_STEP: f64 = 1e-6;

fn grid(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = f64> {
    (0..=steps).map(move |k| lo + (hi - lo) * k as f64 / steps as f64)
}

/// Generator checks: `φ(1) = 0`, monotonicity, convexity, inverse round trip,
/// derivative consistency, and the Fréchet–Hoeffding bounds of the copula.
pub fn generator_suite(spec: &CopulaSpec) -> Result<Vec<PropertyReport>> {
    let g = Generator::from_spec(spec)?;
    let name = spec.family().name();
    let mut out = vec![PropertyReport::new(name, "phi(1) = 0", g.phi(1.0).abs(), 1e-12)];

    let pts: Vec<f64> = grid(0.01, 1.0, 99).collect();
    let rise = pts
        .windows(2)
        .map(|w| g.phi(w[1]) - g.phi(w[0]))
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(PropertyReport::new(name, "monotonicity", rise.max(0.0), 0.0));

    let h = 0.005;
    let mut concave = 0.0f64;
    for t in grid(0.02, 0.98, 96) {
        let second = g.phi(t - h) - 2.0 * g.phi(t) + g.phi(t + h);
        concave = concave.max(-second / g.phi(t).abs().max(1.0));
    }
    out.push(PropertyReport::new(name, "convexity", concave, 1e-9));

    let trip = grid(0.01, 0.99, 98)
        .map(|t| (g.phi_inv(g.phi(t)) - t).abs())
        .fold(0.0, f64::max);
    out.push(PropertyReport::new(name, "round trip", trip, 1e-10));

    let deriv = grid(0.05, 0.95, 90)
        .map(|t| {
            let fd = (g.phi(t + FD_STEP) - g.phi(t - FD_STEP)) / (2.0 * FD_STEP);
            let d = g.phi_prime(t);
            (fd - d).abs() / d.abs().max(1e-2)
        })
        .fold(0.0, f64::max);
    out.push(PropertyReport::new(name, "derivative consistency", deriv, 1e-6));

    out.push(frechet_bounds(spec)?);
    Ok(out)
}

fn frechet_bounds(spec: &CopulaSpec) -> Result<PropertyReport> {
    let d = spec.d();
    let mut worst = 0.0f64;
    let mut u = vec![0.0; d];
    // Diagonal-plus-first-coordinate grid keeps the cost independent of d.
    for a in grid(0.05, 0.95, 20) {
        for b in grid(0.05, 0.95, 20) {
            u[0] = a;
            for x in u.iter_mut().skip(1) {
                *x = b;
            }
            let c = copula_cdf(spec, &u)?;
            let lower = (u.iter().sum::<f64>() - (d as f64 - 1.0)).max(0.0);
            let upper = u.iter().copied().fold(1.0, f64::min);
            worst = worst.max(lower - c).max(c - upper);
        }
    }
    Ok(PropertyReport::new(spec.family().name(), "frechet bounds", worst.max(0.0), 1e-12))
}

/// Bivariate Pickands checks for any `A` (and optional `A′`) given as closures.
pub fn pickands_suite_fn(
    subject: &str,
    a: &dyn Fn(f64) -> f64,
    a_prime: Option<&dyn Fn(f64) -> f64>,
) -> Vec<PropertyReport> {
    let mut out = Vec::new();
    let vert = (a(0.0) - 1.0).abs().max((a(1.0) - 1.0).abs());
    out.push(PropertyReport::new(subject, "vertex values", vert, 1e-12));

    let vals: Vec<f64> = grid(0.0, 1.0, 100).map(a).collect();
    let bounds = vals
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let w = k as f64 / 100.0;
            (w.max(1.0 - w) - v).max(v - 1.0)
        })
        .fold(0.0, f64::max);
    out.push(PropertyReport::new(subject, "bounds", bounds, 1e-12));

    let concave = vals
        .windows(3)
        .map(|w| -(w[0] - 2.0 * w[1] + w[2]))
        .fold(0.0, f64::max);
    out.push(PropertyReport::new(subject, "convexity", concave, 1e-9));

    if let Some(ap) = a_prime {
        let deriv = grid(0.05, 0.95, 90)
            .map(|w| {
                let fd = (a(w + FD_STEP) - a(w - FD_STEP)) / (2.0 * FD_STEP);
                let d = ap(w);
                (fd - d).abs() / d.abs().max(1e-2)
            })
            .fold(0.0, f64::max);
        out.push(PropertyReport::new(subject, "derivative consistency", deriv, 1e-6));
    }
    out
}

/// Pickands checks for an extreme-value spec: the bivariate suite for `d = 2`,
/// simplex versions for `d ≥ 3`, and sampler-based checks where `A` has no
/// closed form.
pub fn pickands_suite(spec: &CopulaSpec) -> Result<Vec<PropertyReport>> {
    let name = spec.family().name();
    if spec.d() == 2 {
        let a = |w: f64| pickands(spec, &[1.0 - w, w]).unwrap_or(f64::NAN);
        let ap = |w: f64| crate::extreme::pickands_prime(spec, w).unwrap_or(f64::NAN);
        return Ok(pickands_suite_fn(name, &a, Some(&ap)));
    }
    match pickands(spec, &vec![1.0 / spec.d() as f64; spec.d()]) {
        Ok(_) => Ok(simplex_suite(spec)),
        Err(Error::NotImplemented(_)) => sampler_suite(spec),
        Err(e) => Err(e),
    }
}

fn simplex_points(d: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(d: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == d - 1 {
            let mut w: Vec<f64> = cur.iter().map(|&k| k as f64 / steps as f64).collect();
            w.push(left as f64 / steps as f64);
            out.push(w);
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(d, left - k, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, steps, steps, &mut Vec::new(), &mut out);
    out
}

fn simplex_suite(spec: &CopulaSpec) -> Vec<PropertyReport> {
    let name = spec.family().name();
    let d = spec.d();
    let a = |w: &[f64]| pickands(spec, w).unwrap_or(f64::NAN);
    let mut out = Vec::new();
    let vert = (0..d)
        .map(|j| {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            (a(&e) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    out.push(PropertyReport::new(name, "vertex values", vert, 1e-12));

    let pts = simplex_points(d, 10);
    let vals: Vec<f64> = pts.iter().map(|w| a(w)).collect();
    let bounds = pts
        .iter()
        .zip(&vals)
        .map(|(w, &v)| {
            let m = w.iter().copied().fold(0.0, f64::max);
            (m - v).max(v - 1.0)
        })
        .fold(0.0, f64::max);
    out.push(PropertyReport::new(name, "bounds", bounds, 1e-12));

    let mut concave = 0.0f64;
    for (i, x) in pts.iter().enumerate() {
        for (y, &ay) in pts.iter().zip(&vals).skip(i + 1) {
            let mid: Vec<f64> = x.iter().zip(y).map(|(p, q)| 0.5 * (p + q)).collect();
            concave = concave.max(a(&mid) - 0.5 * (vals[i] + ay));
        }
    }
    out.push(PropertyReport::new(name, "convexity", concave.max(0.0), 1e-9));
    out
}

/// Seed of the fixed sample used by sampler-based checks.
pub const CHECK_SEED: u64 = 20_240_601;
const CHECK_N: usize = 10_000;

fn sampler_suite(spec: &CopulaSpec) -> Result<Vec<PropertyReport>> {
    let name = spec.family().name();
    let s = sample_unimargin(spec, CHECK_N, &mut RngStream::new(CHECK_SEED))?;
    let ks = (0..spec.d()).map(|j| ks_uniform(&s.column(j))).fold(0.0, f64::max);
    let again = sample_unimargin(spec, CHECK_N, &mut RngStream::new(CHECK_SEED))?;
    let diff = s
        .data()
        .iter()
        .zip(again.data())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(vec![
        PropertyReport::new(name, "uniform margins (KS)", ks, 1.95 / (CHECK_N as f64).sqrt()),
        PropertyReport::new(name, "determinism", diff, 0.0),
    ])
}

/// Distribution-function checks behind the elliptical families.
pub fn elliptical_suite(spec: &CopulaSpec) -> Result<Vec<PropertyReport>> {
    let name = spec.family().name();
    let Params::Elliptical { corr, df } = spec.params() else {
        return Err(Error::domain(format!("{name} is not elliptical")));
    };
    let mut out = Vec::new();
    let xs: Vec<f64> = grid(-8.0, 8.0, 160).collect();
    let sym = xs.iter().map(|&x| (norm_cdf(x) + norm_cdf(-x) - 1.0).abs()).fold(0.0, f64::max);
    out.push(PropertyReport::new(name, "normal cdf symmetry", sym, 1e-12));
    let trip = grid(0.001, 0.999, 998)
        .map(|p| (norm_cdf(norm_quantile(p)) - p).abs())
        .fold(0.0, f64::max);
    out.push(PropertyReport::new(name, "normal quantile round trip", trip, 1e-10));
    if let Some(nu) = *df {
        let sym = xs
            .iter()
            .map(|&x| (student_cdf(x, nu) + student_cdf(-x, nu) - 1.0).abs())
            .fold(0.0, f64::max);
        out.push(PropertyReport::new(name, "student cdf symmetry", sym, 1e-12));
        let mut trip = 0.0f64;
        for p in grid(0.01, 0.99, 98) {
            trip = trip.max((student_cdf(student_quantile(p, nu)?, nu) - p).abs());
        }
        out.push(PropertyReport::new(name, "student quantile round trip", trip, 1e-10));
        let lim = xs
            .iter()
            .map(|&x| (student_cdf(x, 1e6) - norm_cdf(x)).abs())
            .fold(0.0, f64::max);
        out.push(PropertyReport::new(name, "student tends to normal", lim, 1e-4));
    }
    let recon = cholesky(corr)?.reconstruct().max_abs_diff(corr);
    out.push(PropertyReport::new(name, "cholesky reconstruction", recon, 1e-10));
    Ok(out)
}

/// Every applicable suite for the family of `spec`.
pub fn validate_spec(spec: &CopulaSpec) -> Result<Vec<PropertyReport>> {
    let f = spec.family();
    let mut out = Vec::new();
    if f.is_archimedean() {
        out.extend(generator_suite(spec)?);
    }
    if f.is_extreme() {
        out.extend(pickands_suite(spec)?);
    }
    if f.is_elliptical() {
        out.extend(elliptical_suite(spec)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::spec::{validate_params, Family};

    fn all_pass(r: &[PropertyReport]) {
        for p in r {
            assert!(p.passed, "{p:?}");
        }
    }

    #[test]
    fn showcase_suites_pass() {
        let cases: Vec<(Family, Vec<f64>, usize)> = vec![
            (Family::Clayton, vec![1.0], 2),
            (Family::Amh, vec![-0.5], 2),
            (Family::Frank, vec![-8.0], 2),
            (Family::Joe, vec![2.0], 2),
            (Family::Nelsen9, vec![1.0], 2),
            (Family::Nelsen10, vec![1.0], 2),
            (Family::Nelsen11, vec![0.5], 2),
            (Family::Nelsen12, vec![1.5], 2),
            (Family::Nelsen13, vec![2.0], 2),
            (Family::Nelsen14, vec![5.0], 2),
            (Family::Nelsen15, vec![1.5], 2),
            (Family::Nelsen22, vec![0.5], 2),
            (Family::Clayton, vec![5.0], 3),
            (Family::Amh, vec![0.5], 3),
            (Family::Frank, vec![8.0], 3),
            (Family::Joe, vec![2.0], 3),
            (Family::Gumbel, vec![0.5], 2),
            (Family::Gumbel, vec![0.5], 3),
            (Family::HuslerReiss, vec![1.0], 2),
            (Family::TEv, vec![0.8, 0.2], 2),
            (Family::Gaussian, vec![0.71], 2),
            (Family::Student, vec![0.71, 4.0], 2),
        ];
        for (f, p, d) in cases {
            all_pass(&validate_spec(&validate_params(f, &p, d).unwrap()).unwrap());
        }
    }

    #[test]
    fn multivariate_without_closed_form() {
        let g = Matrix::from_rows(&[vec![0.0, 3.0, 3.0], vec![3.0, 0.0, 3.0], vec![3.0, 3.0, 0.0]]).unwrap();
        let r = validate_spec(&CopulaSpec::husler_reiss(g).unwrap()).unwrap();
        assert_eq!(r.len(), 2);
        all_pass(&r);
    }

    #[test]
    fn corrupted_pickands_fails_only_convexity() {
        let a = |w: f64| 1.0 - 0.2 * (2.0 * std::f64::consts::PI * w).sin().powi(2);
        let r = pickands_suite_fn("corrupted", &a, None);
        let failed: Vec<&str> = r.iter().filter(|p| !p.passed).map(|p| p.property.as_str()).collect();
        assert_eq!(failed, vec!["convexity"]);
    }

    #[test]
    fn simplex_grid_size() {
        assert_eq!(simplex_points(3, 10).len(), 66);
        assert!(simplex_points(3, 10).iter().all(|w| (w.iter().sum::<f64>() - 1.0).abs() < 1e-12));
    }
}
