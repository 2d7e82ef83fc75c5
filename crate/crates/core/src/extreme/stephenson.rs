//! Positive-stable mixture samplers for the logistic and asymmetric logistic models.

use crate::dists::sample_positive_stable;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sample::{clamp_open, SampleMatrix};
use crate::spec::SubsetWeights;

/// Symmetric logistic sample in dimension `d`, `θ ∈ (0, 1]`.
///
/// Each row draws `S ~ PS(θ)` and sets `U_j = exp(−(E_j / S)^θ)`.
pub fn sample_logistic(theta: f64, d: usize, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::constraint("gumbel", "theta in (0, 1]"));
    }
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let s = sample_positive_stable(rng, theta);
        for _ in 0..d {
            let e = rng.exponential();
            data.push(clamp_open((-(e / s).powf(theta)).exp()));
        }
    }
    Ok(SampleMatrix::uniform_unchecked(n, d, data))
}

/// Asymmetric logistic sample.
///
/// On the unit Fréchet scale `Z_j = max_b ψ_{j,b} (S_b / E_{j,b})^{θ_b}` with an
/// independent `S_b ~ PS(θ_b)` per block (`S_b = 1` for singletons), then
/// `U_j = exp(−1 / Z_j)`.
pub fn sample_asym_logistic(weights: &SubsetWeights, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    let d = weights.d();
    let mut data = Vec::with_capacity(n * d);
    let mut z = vec![0.0f64; d];
    for _ in 0..n {
        z.fill(0.0);
        for b in weights.blocks() {
            let s = if b.members.len() == 1 {
                1.0
            } else {
                sample_positive_stable(rng, b.theta)
            };
            for (&j, &psi) in b.members.iter().zip(&b.weights) {
                let e = rng.exponential();
                if psi > 0.0 {
                    z[j] = z[j].max(psi * (s / e).powf(b.theta));
                }
            }
        }
        data.extend(z.iter().map(|&zj| clamp_open((-1.0 / zj).exp())));
    }
    Ok(SampleMatrix::uniform_unchecked(n, d, data))
}
