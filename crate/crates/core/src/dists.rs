//! Samplers for the auxiliary laws used by the copula algorithms.

use crate::linalg::CholeskyFactor;
use crate::rng::RngStream;

/// Positive stable variate with Laplace transform `exp(−s^α)`, `α ∈ (0, 1]`.
///
/// Kanter's form of the Chambers–Mallows–Stuck construction: one uniform
/// angle on `(0, π)` and one standard exponential.
pub fn sample_positive_stable(rng: &mut RngStream, alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    if alpha == 1.0 {
        return 1.0;
    }
    let u = std::f64::consts::PI * rng.uniform();
    let e = rng.exponential();
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * u).sin() / e;
    a * b.powf((1.0 - alpha) / alpha)
}

/// Logarithmic series variate, `P(V = k) = −p^k / (k ln(1−p))`, by Kemp's LK method.
pub fn sample_logseries(rng: &mut RngStream, p: f64) -> u64 {
    sample_logseries_ln(rng, p, (-p).ln_1p())
}

/// Logarithmic series given `h = ln(1 − p)` directly, which stays accurate
/// when `p` rounds to 1 (Frank with large θ has `h = −θ`).
pub(crate) fn sample_logseries_ln(rng: &mut RngStream, p: f64, h: f64) -> u64 {
    let v = rng.uniform();
    if v >= p {
        return 1;
    }
    let q = -(rng.uniform() * h).exp_m1();
    if v > q {
        return 1;
    }
    let k = 1.0 + (v.ln() / q.ln()).floor();
    if k.is_finite() {
        (k as u64).max(1)
    } else {
        u64::MAX
    }
}

/// Sibuya variate with pgf `1 − (1 − z)^α`, `α ∈ (0, 1]`.
///
/// Drawn as a geometric variate whose success probability is Beta(α, 1 − α);
/// the beta draw is formed from log-gammas so tiny shapes do not underflow.
pub fn sample_sibuya(rng: &mut RngStream, alpha: f64) -> u64 {
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    if alpha == 1.0 {
        return 1;
    }
    let g1 = sample_ln_gamma(rng, alpha);
    let g2 = sample_ln_gamma(rng, 1.0 - alpha);
    // ln(1 − Y) for Y = G1 / (G1 + G2).
    let ln_fail = -softplus(g1 - g2);
    geometric_from_ln_fail(rng, ln_fail)
}

/// Geometric variate on `{1, 2, …}` with success probability `p ∈ (0, 1]`.
pub fn sample_geometric(rng: &mut RngStream, p: f64) -> u64 {
    debug_assert!(p > 0.0 && p <= 1.0);
    if p >= 1.0 {
        return 1;
    }
    geometric_from_ln_fail(rng, (-p).ln_1p())
}

fn geometric_from_ln_fail(rng: &mut RngStream, ln_fail: f64) -> u64 {
    if ln_fail == 0.0 {
        return u64::MAX;
    }
    let k = (rng.uniform().ln() / ln_fail).ceil();
    if k.is_finite() {
        (k as u64).max(1)
    } else if k > 0.0 {
        u64::MAX
    } else {
        1
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Gamma variate with unit scale and shape `k > 0` (Marsaglia–Tsang).
pub fn sample_gamma(rng: &mut RngStream, k: f64) -> f64 {
    sample_ln_gamma(rng, k).exp()
}

/// Logarithm of a gamma variate; shapes below one use the boost
/// `G_k = G_{k+1} · U^{1/k}` carried out in log space.
pub fn sample_ln_gamma(rng: &mut RngStream, k: f64) -> f64 {
    debug_assert!(k > 0.0);
    if k < 1.0 {
        let boost = rng.uniform().ln() / k;
        return marsaglia_tsang(rng, k + 1.0).ln() + boost;
    }
    marsaglia_tsang(rng, k).ln()
}

fn marsaglia_tsang(rng: &mut RngStream, k: f64) -> f64 {
    let d = k - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Chi-square variate with `df > 0` degrees of freedom.
pub fn sample_chisq(rng: &mut RngStream, df: f64) -> f64 {
    2.0 * sample_gamma(rng, 0.5 * df)
}

/// Centered multivariate normal `L · z`, written into `out`.
pub fn sample_mvn(rng: &mut RngStream, factor: &CholeskyFactor, out: &mut [f64]) {
    let d = factor.dim();
    let mut z = [0.0f64; 16];
    let mut heap;
    let z: &mut [f64] = if d <= z.len() {
        &mut z[..d]
    } else {
        heap = vec![0.0; d];
        &mut heap
    };
    for zi in z.iter_mut() {
        *zi = rng.normal();
    }
    factor.mul_vec(z, out);
}

/// Dirichlet variate with concentrations `sigma`, written into `out`.
pub fn sample_dirichlet(rng: &mut RngStream, sigma: &[f64], out: &mut [f64]) {
    for (o, &s) in out.iter_mut().zip(sigma) {
        *o = sample_ln_gamma(rng, s);
    }
    let m = out.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for o in out.iter_mut() {
        *o = (*o - m).exp();
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}
