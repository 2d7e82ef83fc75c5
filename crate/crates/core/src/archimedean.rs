//! Archimedean generators, copula functions and frailty sampling.

use std::f64::consts::FRAC_PI_2;

use crate::dists::{
    sample_gamma, sample_geometric, sample_logseries_ln, sample_positive_stable, sample_sibuya,
};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sample::{clamp_open, SampleMatrix};
use crate::spec::{CopulaSpec, Family};

/// Lower clamp applied to generator arguments.
pub const T_FLOOR: f64 = 1e-15;

/// Law of the frailty `V` whose Laplace transform is `φ⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Frailty {
    /// `θ · Gamma(1/θ)` (Clayton).
    ScaledGamma { theta: f64 },
    /// Positive stable with index `alpha` (Gumbel).
    PositiveStable { alpha: f64 },
    /// Logarithmic series with `p = 1 − e^{−θ}` (Frank).
    LogSeries { theta: f64 },
    /// Sibuya with `alpha = 1/θ` (Joe).
    Sibuya { alpha: f64 },
    /// Geometric with success probability `p = 1 − θ` (AMH).
    Geometric { p: f64 },
}

impl Frailty {
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match *self {
            Frailty::ScaledGamma { theta } => theta * sample_gamma(rng, 1.0 / theta),
            Frailty::PositiveStable { alpha } => sample_positive_stable(rng, alpha),
            Frailty::LogSeries { theta } => {
                sample_logseries_ln(rng, -(-theta).exp_m1(), -theta) as f64
            }
            Frailty::Sibuya { alpha } => sample_sibuya(rng, alpha) as f64,
            Frailty::Geometric { p } => sample_geometric(rng, p) as f64,
        }
    }
}

/// Generator `φ`, its inverse and derivative for one family and parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Generator {
    family: Family,
    theta: f64,
}

impl Generator {
    pub fn from_spec(spec: &CopulaSpec) -> Result<Self> {
        match (spec.family().is_archimedean(), spec.theta()) {
            (true, Some(theta)) => Ok(Self {
                family: spec.family(),
                theta,
            }),
            _ => Err(Error::NotImplemented(format!(
                "{} has no Archimedean generator",
                spec.family()
            ))),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `φ(0)`: infinite for strict generators.
    pub fn phi_at_zero(&self) -> f64 {
        let th = self.theta;
        match self.family {
            Family::Clayton if th < 0.0 => -1.0 / th,
            Family::Nelsen11 => std::f64::consts::LN_2,
            Family::Nelsen15 => 1.0,
            Family::Nelsen22 => FRAC_PI_2,
            _ => f64::INFINITY,
        }
    }

    /// `φ(t)` with `t` clamped into `[T_FLOOR, 1]`.
    pub fn phi(&self, t: f64) -> f64 {
        let t = t.clamp(T_FLOOR, 1.0);
        let th = self.theta;
        match self.family {
            Family::Clayton => (-th * t.ln()).exp_m1() / th,
            Family::Amh => (-th * (1.0 - t)).ln_1p() - t.ln(),
            Family::Frank => -((-th * t).exp_m1() / (-th).exp_m1()).ln(),
            Family::Joe => -(-(1.0 - t).powf(th)).ln_1p(),
            Family::Gumbel => (-t.ln()).powf(1.0 / th),
            Family::Nelsen9 => (-th * t.ln()).ln_1p(),
            Family::Nelsen10 => (2.0 * t.powf(-th) - 1.0).ln(),
            Family::Nelsen11 => (2.0 - t.powf(th)).ln(),
            Family::Nelsen12 => (1.0 / t - 1.0).powf(th),
            Family::Nelsen13 => (1.0 - t.ln()).powf(th) - 1.0,
            Family::Nelsen14 => (t.powf(-1.0 / th) - 1.0).powf(th),
            Family::Nelsen15 => (1.0 - t.powf(1.0 / th)).powf(th),
            Family::Nelsen22 => (1.0 - t.powf(th)).asin(),
            _ => unreachable!("generator built only for Archimedean families"),
        }
    }

    /// `φ⁻¹(s)` for `s ≥ 0`; zero beyond `φ(0)` for non-strict generators.
    pub fn phi_inv(&self, s: f64) -> f64 {
        let th = self.theta;
        if s >= self.phi_at_zero() {
            return 0.0;
        }
        match self.family {
            Family::Clayton => (-(th * s).ln_1p() / th).exp(),
            Family::Amh => (1.0 - th) / (s.exp() - th),
            Family::Frank => -((-s).exp() * (-th).exp_m1()).ln_1p() / th,
            Family::Joe => 1.0 - (-(-s).exp_m1()).powf(1.0 / th),
            Family::Gumbel => (-s.powf(th)).exp(),
            Family::Nelsen9 => (-s.exp_m1() / th).exp(),
            Family::Nelsen10 => ((s.exp() + 1.0) / 2.0).powf(-1.0 / th),
            Family::Nelsen11 => (2.0 - s.exp()).max(0.0).powf(1.0 / th),
            Family::Nelsen12 => 1.0 / (1.0 + s.powf(1.0 / th)),
            Family::Nelsen13 => (1.0 - (1.0 + s).powf(1.0 / th)).exp(),
            Family::Nelsen14 => (1.0 + s.powf(1.0 / th)).powf(-th),
            Family::Nelsen15 => (1.0 - s.powf(1.0 / th)).max(0.0).powf(th),
            Family::Nelsen22 => (1.0 - s.sin()).max(0.0).powf(1.0 / th),
            _ => unreachable!("generator built only for Archimedean families"),
        }
    }

    /// `φ′(t)` with `t` clamped into `[T_FLOOR, 1]`.
    pub fn phi_prime(&self, t: f64) -> f64 {
        let t = t.clamp(T_FLOOR, 1.0);
        let th = self.theta;
        match self.family {
            Family::Clayton => -t.powf(-th - 1.0),
            Family::Amh => th / (1.0 - th * (1.0 - t)) - 1.0 / t,
            Family::Frank => -th / (th * t).exp_m1(),
            Family::Joe => {
                let a = (1.0 - t).powf(th);
                -th * (1.0 - t).powf(th - 1.0) / (1.0 - a)
            }
            Family::Gumbel => -(-t.ln()).powf(1.0 / th - 1.0) / (th * t),
            Family::Nelsen9 => -th / (t * (1.0 - th * t.ln())),
            Family::Nelsen10 => {
                let a = t.powf(-th);
                -2.0 * th * a / (t * (2.0 * a - 1.0))
            }
            Family::Nelsen11 => -th * t.powf(th - 1.0) / (2.0 - t.powf(th)),
            Family::Nelsen12 => -th * (1.0 / t - 1.0).powf(th - 1.0) / (t * t),
            Family::Nelsen13 => -th * (1.0 - t.ln()).powf(th - 1.0) / t,
            Family::Nelsen14 => {
                let a = t.powf(-1.0 / th);
                -(a - 1.0).powf(th - 1.0) * a / t
            }
            Family::Nelsen15 => {
                let a = t.powf(1.0 / th);
                -(1.0 - a).powf(th - 1.0) * a / t
            }
            Family::Nelsen22 => {
                let a = t.powf(th);
                let b = 1.0 - a;
                -th * a / (t * (1.0 - b * b).sqrt())
            }
            _ => unreachable!("generator built only for Archimedean families"),
        }
    }

    /// Frailty law, when the generator is the Laplace transform of one.
    pub fn frailty(&self) -> Result<Frailty> {
        let th = self.theta;
        let unavailable = |reason: &str| {
            Err(Error::FrailtyUnavailable {
                family: self.family.name().into(),
                reason: reason.into(),
            })
        };
        match self.family {
            Family::Clayton if th > 0.0 => Ok(Frailty::ScaledGamma { theta: th }),
            Family::Clayton => unavailable("theta < 0 is not completely monotone"),
            Family::Gumbel => Ok(Frailty::PositiveStable { alpha: th }),
            Family::Frank if th > 0.0 => Ok(Frailty::LogSeries { theta: th }),
            Family::Frank => unavailable("theta < 0 is not completely monotone"),
            Family::Joe => Ok(Frailty::Sibuya { alpha: 1.0 / th }),
            Family::Amh if th >= 0.0 => Ok(Frailty::Geometric { p: 1.0 - th }),
            Family::Amh => unavailable("theta < 0 is not completely monotone"),
            _ => unavailable("no frailty representation is implemented"),
        }
    }

    /// `φ⁻¹(Σ φ(u_j))` clamped to `[0, 1]`; no domain checks.
    pub fn cdf(&self, u: &[f64]) -> f64 {
        let s: f64 = u.iter().map(|&x| self.phi(x)).sum();
        self.phi_inv(s).clamp(0.0, 1.0)
    }

    /// `∂C/∂u0 = φ′(u0) / φ′(C(u0, u1))`, zero where `C` vanishes.
    pub fn cond_cdf(&self, u0: f64, u1: f64) -> f64 {
        let c = self.cdf(&[u0, u1]);
        if c <= 0.0 {
            return 0.0;
        }
        let r = self.phi_prime(u0) / self.phi_prime(c);
        if r.is_nan() {
            0.0
        } else {
            r.clamp(0.0, 1.0)
        }
    }
}

fn check_unit(t: f64, what: &str) -> Result<()> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} = {t} is outside (0, 1]")))
    }
}

pub fn phi(spec: &CopulaSpec, t: f64) -> Result<f64> {
    check_unit(t, "t")?;
    Ok(Generator::from_spec(spec)?.phi(t))
}

pub fn phi_inv(spec: &CopulaSpec, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("generator inverse needs s >= 0, got {s}")));
    }
    Ok(Generator::from_spec(spec)?.phi_inv(s))
}

pub fn phi_prime(spec: &CopulaSpec, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("t = {t} is outside (0, 1)")));
    }
    Ok(Generator::from_spec(spec)?.phi_prime(t))
}

/// Archimedean copula `C(u) = φ⁻¹(Σ φ(u_j))`.
pub fn arch_cdf(spec: &CopulaSpec, u: &[f64]) -> Result<f64> {
    if u.len() != spec.d() {
        return Err(Error::ArityMismatch {
            what: "copula argument".into(),
            expected: spec.d(),
            got: u.len(),
        });
    }
    for &x in u {
        check_unit(x, "u_j")?;
    }
    Ok(Generator::from_spec(spec)?.cdf(u))
}

/// Conditional distribution of `U1` given `U0 = u0`.
pub fn arch_cond_cdf(spec: &CopulaSpec, u0: f64, u1: f64) -> Result<f64> {
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
    Ok(Generator::from_spec(spec)?.cond_cdf(u0, u1))
}

/// Marshall–Olkin sampling: `U_j = φ⁻¹(E_j / V)` with `V` drawn from the frailty law.
pub fn frailty_sample(spec: &CopulaSpec, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    let g = Generator::from_spec(spec)?;
    let frailty = g.frailty()?;
    let d = spec.d();
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let v = frailty.sample(rng);
        for _ in 0..d {
            let e = rng.exponential();
            data.push(clamp_open(g.phi_inv(e / v)));
        }
    }
    Ok(SampleMatrix::uniform_unchecked(n, d, data))
}
