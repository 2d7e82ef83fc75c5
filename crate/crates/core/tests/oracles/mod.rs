//! Reference values computed independently of the library.

#![allow(dead_code)]

/// Composite Simpson rule on `[a, b]` with `m` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for k in 1..m {
        let x = a + k as f64 * h;
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// Frank τ = 1 − (4/θ)(1 − D₁(θ)), `D₁(θ) = θ⁻¹ ∫₀^θ t/(eᵗ − 1) dt` (θ of either sign).
pub fn frank_tau(theta: f64) -> f64 {
    let integrand = |t: f64| if t == 0.0 { 1.0 } else { t / t.exp_m1() };
    let d1 = simpson(integrand, 0.0, theta, 20_000) / theta;
    1.0 - 4.0 / theta * (1.0 - d1)
}

/// Archimedean τ = 1 + 4 ∫₀¹ φ(t)/φ′(t) dt for the Joe generator.
pub fn joe_tau(theta: f64) -> f64 {
    let ratio = |t: f64| {
        if t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        let a = (1.0 - t).powf(theta);
        let phi = -(1.0 - a).ln();
        let dphi = -theta * (1.0 - t).powf(theta - 1.0) / (1.0 - a);
        phi / dphi
    };
    1.0 + 4.0 * simpson(ratio, 0.0, 1.0, 200_000)
}

/// Kendall τ of an elliptical copula with correlation ρ.
pub fn elliptical_tau(rho: f64) -> f64 {
    2.0 / std::f64::consts::PI * rho.asin()
}
