//! Univariate normal and Student distribution functions.

use statrs::function::beta::beta_reg;
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};
use crate::root::{brent_root, DEFAULT_TOL};

/// Standard normal CDF, `Φ(x) = erfc(−x/√2)/2`.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal quantile through the inverse complementary error function.
pub fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Student CDF with `df` degrees of freedom via the regularized incomplete beta.
///
/// The lower tail is computed directly for both signs of `x`, so
/// `student_cdf(x) + student_cdf(−x) = 1` holds to rounding.
pub fn student_cdf(x: f64, df: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let tail = 0.5 * beta_reg(0.5 * df, 0.5, df / (df + x * x));
    if x > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Student quantile by bracketed root finding on `student_cdf`.
pub fn student_quantile(p: f64, df: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("student quantile needs p in (0,1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let mut hi = 1.0f64;
    let target = |x: f64| student_cdf(x, df) - p;
    let positive = p > 0.5;
    let sign = if positive { 1.0 } else { -1.0 };
    while (target(sign * hi) < 0.0) == positive {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::domain(format!("student quantile of {p} overflows")));
        }
    }
    let (lo, hi) = if positive { (0.0, hi) } else { (-hi, 0.0) };
    brent_root(target, lo, hi, DEFAULT_TOL * hi.abs().max(lo.abs()).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_reference_values() {
        assert!((norm_cdf(0.0) - 0.5).abs() < 1e-15);
        // The erfc backend is accurate to roughly 1e-11 in absolute terms.
        assert!((norm_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-10);
        assert!((norm_cdf(-1.96) - 0.024_997_895_148_220_43).abs() < 1e-10);
        assert!((norm_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-9);
    }

    #[test]
    fn normal_symmetry() {
        for i in -800..=800 {
            let x = i as f64 / 100.0;
            assert!((norm_cdf(x) + norm_cdf(-x) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn normal_quantile_round_trip() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            assert!((norm_cdf(norm_quantile(p)) - p).abs() < 1e-10);
        }
        assert!((norm_cdf(norm_quantile(1e-300)) / 1e-300 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn student_reference_values() {
        // Cauchy: F(1) = 3/4.
        assert!((student_cdf(1.0, 1.0) - 0.75).abs() < 1e-14);
        // df = 2 has F(x) = 1/2 + x / (2 sqrt(2 + x^2)).
        for &x in &[-3.0, -0.4, 0.7, 5.0] {
            let exact = 0.5 + x / (2.0 * (2.0f64 + x * x).sqrt());
            assert!((student_cdf(x, 2.0) - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn student_symmetry_and_quantile() {
        for &df in &[0.5, 1.2, 4.0, 30.0] {
            for i in -50..=50 {
                let x = i as f64 / 5.0;
                assert!((student_cdf(x, df) + student_cdf(-x, df) - 1.0).abs() <= 1e-12);
            }
            for &p in &[1e-6, 0.01, 0.3, 0.5, 0.8, 0.999] {
                let q = student_quantile(p, df).unwrap();
                assert!((student_cdf(q, df) - p).abs() < 1e-10, "df {df} p {p}");
            }
        }
    }

    #[test]
    fn student_tends_to_normal() {
        let mut worst = 0.0f64;
        for i in -60..=60 {
            let x = i as f64 / 10.0;
            worst = worst.max((student_cdf(x, 1e6) - norm_cdf(x)).abs());
        }
        assert!(worst <= 1e-4, "worst {worst}");
    }
}
