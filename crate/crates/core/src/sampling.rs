//! Family-independent entry points: conditional sampling, dispatch and CDFs.

use crate::archimedean::Generator;
use crate::elliptical::{sample_gaussian, sample_student};
use crate::error::{Error, Result};
use crate::extreme::{ev_cdf, sample_asym_logistic, sample_extremal_functions, sample_logistic, EvConditional};
use crate::rng::RngStream;
use crate::root::{brent_root, DEFAULT_TOL};
use crate::sample::{clamp_open, SampleMatrix};
use crate::spec::{CopulaSpec, Family};

const U_LO: f64 = 1e-12;
const U_HI: f64 = 1.0 - 1e-12;

enum Conditional {
    Arch(Generator),
    Ev(EvConditional),
}

impl Conditional {
    fn new(spec: &CopulaSpec) -> Result<Self> {
        if spec.d() != 2 {
            return Err(Error::DimensionUnsupported {
                family: spec.family().name().into(),
                d: spec.d(),
                reason: "conditional sampling is bivariate".into(),
            });
        }
        if spec.family().is_archimedean() {
            Ok(Conditional::Arch(Generator::from_spec(spec)?))
        } else if spec.family().is_extreme() {
            Ok(Conditional::Ev(EvConditional::new(spec)?))
        } else {
            Err(Error::NotImplemented(format!("conditional sampling for {}", spec.family())))
        }
    }

    fn eval(&self, u0: f64, u1: f64) -> f64 {
        match self {
            Conditional::Arch(g) => g.cond_cdf(u0, u1),
            Conditional::Ev(e) => e.eval(u0, u1),
        }
    }
}

/// Conditional-inversion sampling: `u1 = c_{u0}⁻¹(t1)` for independent uniforms `u0, t1`.
pub fn sample_cond_bivariate(spec: &CopulaSpec, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    let cond = Conditional::new(spec)?;
    let mut data = Vec::with_capacity(2 * n);
    for row in 0..n {
        let u0 = rng.uniform();
        let t1 = rng.uniform();
        let f = |u1: f64| cond.eval(u0, u1) - t1;
        let u1 = if f(U_LO) >= 0.0 {
            U_LO
        } else if f(U_HI) <= 0.0 {
            U_HI
        } else {
            brent_root(f, U_LO, U_HI, DEFAULT_TOL).map_err(|e| Error::SamplerFailure {
                row,
                source: Box::new(e),
            })?
        };
        data.push(clamp_open(u0));
        data.push(clamp_open(u1));
    }
    Ok(SampleMatrix::uniform_unchecked(n, 2, data))
}

/// Samples `n` rows with uniform margins using the method suited to the family.
pub fn sample_unimargin(spec: &CopulaSpec, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    let f = spec.family();
    match f {
        Family::Gumbel => sample_logistic(spec.theta().expect("scalar theta"), spec.d(), n, rng),
        Family::AsyLogistic => sample_asym_logistic(&spec.subset_weights().expect("subset weights"), n, rng),
        Family::Galambos | Family::AsyNegLogistic | Family::AsyMixed => sample_cond_bivariate(spec, n, rng),
        Family::HuslerReiss | Family::TEv | Family::Bilogistic | Family::Dirichlet => {
            sample_extremal_functions(spec, n, rng)
        }
        Family::Gaussian => sample_gaussian(spec, n, rng),
        Family::Student => sample_student(spec, n, rng),
        _ => {
            let g = Generator::from_spec(spec)?;
            if g.frailty().is_ok() {
                crate::archimedean::frailty_sample(spec, n, rng)
            } else {
                sample_cond_bivariate(spec, n, rng)
            }
        }
    }
}

/// Copula distribution function for Archimedean and extreme-value families.
pub fn copula_cdf(spec: &CopulaSpec, u: &[f64]) -> Result<f64> {
    let f = spec.family();
    if f.is_archimedean() {
        crate::archimedean::arch_cdf(spec, u)
    } else if f.is_extreme() {
        ev_cdf(spec, u)
    } else {
        Err(Error::NotImplemented(format!("closed-form distribution function of {f}")))
    }
}

/// Conditional distribution `∂C/∂u0` for bivariate Archimedean and extreme-value families.
pub fn cond_cdf(spec: &CopulaSpec, u0: f64, u1: f64) -> Result<f64> {
    if !(u0 > 0.0 && u0 < 1.0 && u1 > 0.0 && u1 < 1.0) {
        return Err(Error::domain(format!("({u0}, {u1}) is outside the open unit square")));
    }
    Ok(Conditional::new(spec)?.eval(u0, u1))
}
