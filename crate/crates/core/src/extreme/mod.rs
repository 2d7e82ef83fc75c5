//! Extreme-value copulas: Pickands dependence functions, stable tail
//! dependence, copula and conditional distributions, and samplers.
//!
//! Bivariate Pickands functions take the scalar `w` = weight of coordinate 1,
//! so `ℓ(x0, x1) = (x0 + x1) A(x1 / (x0 + x1))`.

mod extremal;
mod stephenson;

pub use extremal::{rext_func, sample_extremal_functions, sample_extremal_functions_with_cap, DEFAULT_PROPOSAL_CAP};
pub use stephenson::{sample_asym_logistic, sample_logistic};

use crate::error::{Error, Result};
use crate::root::{brent_root, DEFAULT_TOL};
use crate::spec::{CopulaSpec, Params, SubsetWeights};
use crate::special::{norm_cdf, student_cdf};

/// Tolerance within which a weight vector is renormalized onto the simplex.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Bivariate Pickands function with its derivative.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Bivariate {
    Logistic { theta: f64 },
    NegLogistic { theta: f64, psi1: f64, psi2: f64 },
    Subsets(SubsetWeights),
    Mixed { theta: f64, psi1: f64 },
    HuslerReiss { theta: f64 },
    TEv { rho: f64, df: f64 },
    Bilogistic { alpha: f64, beta: f64 },
}

impl Bivariate {
    pub(crate) fn from_spec(spec: &CopulaSpec) -> Result<Self> {
        if spec.d() != 2 || !spec.family().is_extreme() {
            return Err(Error::NotImplemented(format!(
                "bivariate Pickands function of {} in dimension {}",
                spec.family(),
                spec.d()
            )));
        }
        Ok(match spec.params() {
            Params::Theta(t) if spec.family() == crate::Family::Gumbel => Bivariate::Logistic { theta: *t },
            // Galambos is the negative logistic with unit weights.
            Params::Theta(t) => Bivariate::NegLogistic {
                theta: *t,
                psi1: 1.0,
                psi2: 1.0,
            },
            &Params::AsyNegLogistic { theta, psi1, psi2 } => Bivariate::NegLogistic { theta, psi1, psi2 },
            Params::AsyLogistic { .. } | Params::Subsets(_) => {
                Bivariate::Subsets(spec.subset_weights().expect("asymmetric logistic weights"))
            }
            &Params::AsyMixed { theta, psi1 } => Bivariate::Mixed { theta, psi1 },
            Params::Variogram(g) => Bivariate::HuslerReiss {
                theta: g.get(0, 1).sqrt() / 2.0,
            },
            &Params::TEv { rho, df } => Bivariate::TEv { rho, df },
            &Params::Bilogistic { alpha, beta } => Bivariate::Bilogistic { alpha, beta },
            Params::Dirichlet(_) => {
                return Err(Error::NotImplemented(
                    "the Dirichlet mixture has no closed-form Pickands function".into(),
                ))
            }
            Params::Elliptical { .. } => unreachable!("elliptical families are not extreme-value"),
        })
    }

    pub(crate) fn a(&self, w: f64) -> f64 {
        let w = w.clamp(0.0, 1.0);
        let v = 1.0 - w;
        match self {
            &Bivariate::Logistic { theta } => {
                if theta == 1.0 {
                    return 1.0;
                }
                let r = 1.0 / theta;
                (w.powf(r) + v.powf(r)).powf(theta)
            }
            &Bivariate::NegLogistic { theta, psi1, psi2 } => {
                if theta == 0.0 || w == 0.0 || w == 1.0 {
                    return 1.0;
                }
                let (a, b) = (-theta * (psi1 * w).ln(), -theta * (psi2 * v).ln());
                1.0 - (-log_sum_exp(a, b) / theta).exp()
            }
            Bivariate::Subsets(s) => subsets_pickands(s, &[v, w]),
            &Bivariate::Mixed { theta, psi1 } => 1.0 - (theta + psi1) * w + theta * w * w + psi1 * w * w * w,
            &Bivariate::HuslerReiss { theta } => {
                if w == 0.0 || w == 1.0 {
                    return 1.0;
                }
                let l = (w / v).ln() / (2.0 * theta);
                v * norm_cdf(theta - l) + w * norm_cdf(theta + l)
            }
            &Bivariate::TEv { rho, df } => {
                if w == 0.0 || w == 1.0 {
                    return 1.0;
                }
                let (zw, zv) = tev_z(w, rho, df);
                w * student_cdf(zw, df + 1.0) + v * student_cdf(zv, df + 1.0)
            }
            &Bivariate::Bilogistic { alpha, beta } => {
                if w == 0.0 || w == 1.0 {
                    return 1.0;
                }
                let q = bilogistic_q(w, alpha, beta);
                w * q.powf(1.0 - alpha) + v * (1.0 - q).powf(1.0 - beta)
            }
        }
    }

    /// `A′(w)` for `w ∈ (0, 1)`.
    pub(crate) fn a_prime(&self, w: f64) -> f64 {
        let v = 1.0 - w;
        match self {
            &Bivariate::Logistic { theta } => {
                if theta == 1.0 {
                    return 0.0;
                }
                let r = 1.0 / theta;
                let s = w.powf(r) + v.powf(r);
                s.powf(theta - 1.0) * (w.powf(r - 1.0) - v.powf(r - 1.0))
            }
            &Bivariate::NegLogistic { theta, psi1, psi2 } => {
                if theta == 0.0 {
                    return 0.0;
                }
                let (a, b) = (-theta * (psi1 * w).ln(), -theta * (psi2 * v).ln());
                let ls = log_sum_exp(a, b);
                (-ls / theta).exp() * ((b - ls).exp() / v - (a - ls).exp() / w)
            }
            Bivariate::Subsets(s) => subsets_pickands_prime(s, w),
            &Bivariate::Mixed { theta, psi1 } => -(theta + psi1) + 2.0 * theta * w + 3.0 * psi1 * w * w,
            &Bivariate::HuslerReiss { theta } => {
                let l = (w / v).ln() / (2.0 * theta);
                norm_cdf(theta + l) - norm_cdf(theta - l)
            }
            &Bivariate::TEv { rho, df } => {
                let (zw, zv) = tev_z(w, rho, df);
                student_cdf(zw, df + 1.0) - student_cdf(zv, df + 1.0)
            }
            &Bivariate::Bilogistic { alpha, beta } => {
                let q = bilogistic_q(w, alpha, beta);
                q.powf(1.0 - alpha) - (1.0 - q).powf(1.0 - beta)
            }
        }
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Arguments `(z_w, z_{1−w})` of the extremal-t Pickands function.
fn tev_z(w: f64, rho: f64, df: f64) -> (f64, f64) {
    let scale = ((df + 1.0) / (1.0 - rho * rho)).sqrt();
    let r = (w.ln() - (1.0 - w).ln()) / df;
    (scale * (r.exp() - rho), scale * ((-r).exp() - rho))
}

/// Root `q ∈ (0, 1)` of `(1−α) w (1−q)^β = (1−β)(1−w) q^α`.
fn bilogistic_q(w: f64, alpha: f64, beta: f64) -> f64 {
    let f = |q: f64| (1.0 - alpha) * w * (1.0 - q).powf(beta) - (1.0 - beta) * (1.0 - w) * q.powf(alpha);
    // f(0) > 0 > f(1) for w in (0, 1), so the bracket always holds.
    brent_root(f, 0.0, 1.0, DEFAULT_TOL).unwrap_or(0.5)
}

/// `Σ_b (Σ_{j∈b} (ψ_{j,b} w_j)^{1/θ_b})^{θ_b}`.
pub(crate) fn subsets_pickands(s: &SubsetWeights, w: &[f64]) -> f64 {
    s.blocks()
        .iter()
        .map(|b| {
            if b.members.len() == 1 {
                return b.weights[0] * w[b.members[0]];
            }
            let r = 1.0 / b.theta;
            let inner: f64 = b
                .members
                .iter()
                .zip(&b.weights)
                .map(|(&j, &p)| (p * w[j]).powf(r))
                .sum();
            inner.powf(b.theta)
        })
        .sum()
}

fn subsets_pickands_prime(s: &SubsetWeights, w: f64) -> f64 {
    let x = [1.0 - w, w];
    let sign = [-1.0, 1.0];
    s.blocks()
        .iter()
        .map(|b| {
            if b.members.len() == 1 {
                return b.weights[0] * sign[b.members[0]];
            }
            let r = 1.0 / b.theta;
            let mut inner = 0.0;
            let mut grad = 0.0;
            for (&j, &p) in b.members.iter().zip(&b.weights) {
                if p == 0.0 {
                    continue;
                }
                inner += (p * x[j]).powf(r);
                grad += sign[j] * p.powf(r) * x[j].powf(r - 1.0);
            }
            if inner == 0.0 {
                0.0
            } else {
                inner.powf(b.theta - 1.0) * grad
            }
        })
        .sum()
}

/// Checks a simplex point, renormalizing small drift.
fn on_simplex(w: &[f64], d: usize) -> Result<Vec<f64>> {
    if w.len() != d {
        return Err(Error::ArityMismatch {
            what: "simplex point".into(),
            expected: d,
            got: w.len(),
        });
    }
    if w.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::domain(format!("{w:?} has negative or NaN weights")));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::domain(format!("{w:?} sums to {s}, not 1")));
    }
    Ok(w.iter().map(|x| x / s).collect())
}

/// Pickands dependence function `A(w)` at a simplex point.
pub fn pickands(spec: &CopulaSpec, w: &[f64]) -> Result<f64> {
    if !spec.family().is_extreme() {
        return Err(Error::NotImplemented(format!("{} is not an extreme-value copula", spec.family())));
    }
    let w = on_simplex(w, spec.d())?;
    if spec.d() == 2 {
        return Ok(Bivariate::from_spec(spec)?.a(w[1]));
    }
    match spec.params() {
        Params::Theta(t) => {
            let r = 1.0 / t;
            Ok(w.iter().map(|x| x.powf(r)).sum::<f64>().powf(*t))
        }
        Params::Subsets(s) => Ok(subsets_pickands(s, &w)),
        Params::Variogram(_) => Err(Error::NotImplemented(
            "Hüsler–Reiss Pickands function for d > 2".into(),
        )),
        Params::Dirichlet(_) => Err(Error::NotImplemented(
            "the Dirichlet mixture has no closed-form Pickands function".into(),
        )),
        _ => unreachable!("validated multivariate extreme families"),
    }
}

/// Bivariate `A(w)` with `w` the weight of coordinate 1.
pub fn pickands2(spec: &CopulaSpec, w: f64) -> Result<f64> {
    pickands(spec, &[1.0 - w, w])
}

/// Bivariate `A′(w)` for `w ∈ (0, 1)`.
pub fn pickands_prime(spec: &CopulaSpec, w: f64) -> Result<f64> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::domain(format!("A' needs w in (0, 1), got {w}")));
    }
    Ok(Bivariate::from_spec(spec)?.a_prime(w))
}

/// Stable tail dependence function `ℓ(x) = (Σ x_j) A(x / Σ x_j)`.
pub fn stdf(spec: &CopulaSpec, x: &[f64]) -> Result<f64> {
    if x.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::domain(format!("{x:?} is not a finite nonnegative vector")));
    }
    let s: f64 = x.iter().sum();
    if s <= 0.0 {
        return Err(Error::domain("stable tail dependence needs a nonzero argument"));
    }
    let w: Vec<f64> = x.iter().map(|v| v / s).collect();
    Ok(s * pickands(spec, &w)?)
}

/// Extreme-value copula `C(u) = exp(−ℓ(−ln u))`.
pub fn ev_cdf(spec: &CopulaSpec, u: &[f64]) -> Result<f64> {
    if u.len() != spec.d() {
        return Err(Error::ArityMismatch {
            what: "copula argument".into(),
            expected: spec.d(),
            got: u.len(),
        });
    }
    if u.iter().any(|v| !(*v > 0.0 && *v <= 1.0)) {
        return Err(Error::domain(format!("{u:?} is outside (0, 1]^d")));
    }
    let x: Vec<f64> = u.iter().map(|v| -v.ln()).collect();
    if x.iter().all(|v| *v == 0.0) {
        return Ok(1.0);
    }
    Ok((-stdf(spec, &x)?).exp())
}

/// `∂C/∂u0 = (C / u0) · (A(t) − t A′(t))` with `t = ln u1 / ln(u0 u1)`.
pub fn ev_cond_cdf(spec: &CopulaSpec, u0: f64, u1: f64) -> Result<f64> {
    if spec.d() != 2 {
        return Err(Error::DimensionUnsupported {
            family: spec.family().name().into(),
            d: spec.d(),
            reason: "conditional distribution is bivariate".into(),
        });
    }
    if !(u0 > 0.0 && u0 < 1.0 && u1 > 0.0 && u1 < 1.0) {
        return Err(Error::domain(format!("({u0}, {u1}) is outside the open unit square")));
    }
    Ok(EvConditional::new(spec)?.eval(u0, u1))
}

/// Pre-resolved conditional distribution for repeated evaluation.
pub(crate) struct EvConditional {
    model: Bivariate,
}

impl EvConditional {
    pub(crate) fn new(spec: &CopulaSpec) -> Result<Self> {
        Ok(Self {
            model: Bivariate::from_spec(spec)?,
        })
    }

    pub(crate) fn eval(&self, u0: f64, u1: f64) -> f64 {
        let (l0, l1) = (u0.ln(), u1.ln());
        let s = l0 + l1;
        let t = (l1 / s).clamp(1e-15, 1.0 - 1e-15);
        let a = self.model.a(t);
        let c = (s * a).exp();
        let mu = a - t * self.model.a_prime(t);
        let r = c / u0 * mu;
        if r.is_nan() {
            0.0
        } else {
            r.clamp(0.0, 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{validate_params, Block, Family};
    use crate::linalg::Matrix;

    fn spec(f: Family, p: &[f64]) -> CopulaSpec {
        validate_params(f, p, 2).unwrap()
    }

    fn showcase() -> Vec<CopulaSpec> {
        vec![
            spec(Family::Gumbel, &[0.5]),
            spec(Family::Galambos, &[1.5]),
            spec(Family::AsyLogistic, &[1.5, 0.1, 1.0]),
            spec(Family::AsyNegLogistic, &[10.0, 0.5, 1.0]),
            spec(Family::AsyMixed, &[4.0 / 3.0, -1.0 / 3.0]),
            spec(Family::HuslerReiss, &[1.0]),
            spec(Family::TEv, &[0.8, 0.2]),
            spec(Family::Bilogistic, &[0.3, 0.6]),
        ]
    }

    #[test]
    fn reference_values() {
        let l = spec(Family::Gumbel, &[0.5]);
        assert!((pickands2(&l, 0.5).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((stdf(&l, &[1.0, 1.0]).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let c = ev_cdf(&l, &[0.5, 0.5]).unwrap();
        assert!((c - (-2.0 * 2f64.ln() * 0.5f64.sqrt()).exp()).abs() < 1e-14);
        let ind = spec(Family::Gumbel, &[1.0]);
        assert_eq!(pickands2(&ind, 0.3).unwrap(), 1.0);
        assert!((ev_cond_cdf(&ind, 0.3, 0.6).unwrap() - 0.6).abs() < 1e-14);
        let anl = spec(Family::AsyNegLogistic, &[10.0, 0.1, 1.0]);
        let direct = 1.0 - (0.05f64.powf(-10.0) + 0.5f64.powf(-10.0)).powf(-0.1);
        assert!((pickands2(&anl, 0.5).unwrap() - direct).abs() < 1e-14);
        assert!((direct - 0.95).abs() < 1e-4);
        let hr = spec(Family::HuslerReiss, &[1.0]);
        assert!((pickands2(&hr, 0.5).unwrap() - norm_cdf(1.0)).abs() < 1e-15);
    }

    #[test]
    fn asym_logistic_matches_table_formula() {
        let s = spec(Family::AsyLogistic, &[1.5, 0.1, 1.0]);
        for i in 0..=20 {
            let w = i as f64 / 20.0;
            let table = (1.0 - 0.1) * w
                + (1.0 - 1.0) * (1.0 - w)
                + ((0.1 * w).powf(1.5) + (1.0 * (1.0 - w)).powf(1.5)).powf(1.0 / 1.5);
            assert!((pickands2(&s, w).unwrap() - table).abs() < 1e-14);
        }
        assert!((pickands2(&s, 0.5).unwrap() - 0.960_486).abs() < 1e-6);
    }

    #[test]
    fn vertices_bounds_convexity() {
        for s in showcase() {
            assert!((pickands2(&s, 0.0).unwrap() - 1.0).abs() <= 1e-12, "{:?}", s.family());
            assert!((pickands2(&s, 1.0).unwrap() - 1.0).abs() <= 1e-12, "{:?}", s.family());
            let a: Vec<f64> = (0..=100).map(|i| pickands2(&s, i as f64 / 100.0).unwrap()).collect();
            for (i, v) in a.iter().enumerate() {
                let w = i as f64 / 100.0;
                assert!(*v >= w.max(1.0 - w) - 1e-12 && *v <= 1.0 + 1e-12, "{:?} {w}", s.family());
            }
            for i in 1..100 {
                assert!(a[i - 1] - 2.0 * a[i] + a[i + 1] >= -1e-9, "{:?} {i}", s.family());
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for s in showcase() {
            for i in 0..=90 {
                let w = 0.05 + i as f64 * 0.01;
                let fd = (pickands2(&s, w + h).unwrap() - pickands2(&s, w - h).unwrap()) / (2.0 * h);
                let d = pickands_prime(&s, w).unwrap();
                assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-2), "{:?} w={w} fd={fd} d={d}", s.family());
            }
        }
    }

    #[test]
    fn max_stability_and_homogeneity() {
        let mut rng = crate::RngStream::new(5);
        for s in showcase() {
            for _ in 0..100 {
                let u = [rng.uniform(), rng.uniform()];
                let c = ev_cdf(&s, &u).unwrap();
                for m in [2.0, 5.0, 10.0] {
                    let um = [u[0].powf(1.0 / m), u[1].powf(1.0 / m)];
                    assert!((ev_cdf(&s, &um).unwrap().powf(m) - c).abs() <= 1e-10);
                }
                let x = [rng.exponential(), rng.exponential()];
                let l = stdf(&s, &x).unwrap();
                for k in [0.5, 2.0, 10.0] {
                    assert!((stdf(&s, &[k * x[0], k * x[1]]).unwrap() - k * l).abs() <= 1e-12 * k.max(1.0) * l);
                }
                assert!(l >= x[0].max(x[1]) - 1e-12 && l <= x[0] + x[1] + 1e-12);
            }
        }
    }

    #[test]
    fn cond_cdf_matches_finite_difference() {
        let h = 1e-6;
        for s in showcase() {
            for i in 1..=9 {
                for j in 1..=9 {
                    let (u0, u1) = (i as f64 / 10.0, j as f64 / 10.0);
                    let fd = (ev_cdf(&s, &[u0 + h, u1]).unwrap() - ev_cdf(&s, &[u0 - h, u1]).unwrap()) / (2.0 * h);
                    let c = ev_cond_cdf(&s, u0, u1).unwrap();
                    assert!((fd - c).abs() < 1e-5, "{:?} ({u0},{u1}) fd={fd} c={c}", s.family());
                }
            }
            assert!(ev_cond_cdf(&s, 0.4, 1.0 - 1e-12).unwrap() > 1.0 - 1e-6);
        }
    }

    #[test]
    fn multivariate_cases() {
        let l = validate_params(Family::Gumbel, &[0.5], 3).unwrap();
        let third = 1.0 / 3.0;
        assert!((pickands(&l, &[third, third, third]).unwrap() - (3.0 * third.powi(2)).sqrt()).abs() < 1e-14);
        let b = |m: Vec<usize>, t: f64, w: Vec<f64>| Block {
            members: m,
            theta: t,
            weights: w,
        };
        let w = crate::SubsetWeights::new(
            3,
            vec![
                b(vec![0], 1.0, vec![0.4]),
                b(vec![1], 1.0, vec![0.1]),
                b(vec![2], 1.0, vec![0.6]),
                b(vec![0, 1], 0.6, vec![0.3, 0.2]),
                b(vec![0, 2], 0.5, vec![0.1, 0.1]),
                b(vec![1, 2], 0.8, vec![0.4, 0.1]),
                b(vec![0, 1, 2], 0.3, vec![0.2, 0.3, 0.2]),
            ],
        )
        .unwrap();
        let s = CopulaSpec::asym_logistic(w).unwrap();
        for v in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            assert!((pickands(&s, &v).unwrap() - 1.0).abs() <= 1e-12);
        }
        let g = Matrix::from_rows(&[vec![0.0, 3.0, 3.0], vec![3.0, 0.0, 3.0], vec![3.0, 3.0, 0.0]]).unwrap();
        let hr = CopulaSpec::husler_reiss(g).unwrap();
        assert!(matches!(pickands(&hr, &[third, third, third]), Err(Error::NotImplemented(_))));
    }

    #[test]
    fn simplex_checks() {
        let l = spec(Family::Gumbel, &[0.5]);
        assert!(pickands(&l, &[0.5, 0.5 + 1e-10]).is_ok());
        assert!(pickands(&l, &[0.5, 0.6]).is_err());
        assert!(pickands(&l, &[-0.1, 1.1]).is_err());
        assert!(stdf(&l, &[0.0, 0.0]).is_err());
    }
}
