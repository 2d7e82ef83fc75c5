//! Gaussian and Student copula samplers.

use crate::dists::{sample_chisq, sample_mvn};
use crate::error::{Error, Result};
use crate::linalg::cholesky;
use crate::rng::RngStream;
use crate::sample::{clamp_open, SampleMatrix};
use crate::spec::{CopulaSpec, Params};
use crate::special::{norm_cdf, student_cdf};

fn elliptical_parts(spec: &CopulaSpec) -> Result<(&crate::Matrix, Option<f64>)> {
    match spec.params() {
        Params::Elliptical { corr, df } => Ok((corr, *df)),
        _ => Err(Error::domain(format!("{} is not an elliptical copula", spec.family()))),
    }
}

/// Gaussian copula sample: `U = Φ(L z)` rowwise.
pub fn sample_gaussian(spec: &CopulaSpec, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    let (corr, _) = elliptical_parts(spec)?;
    let factor = cholesky(corr)?;
    let d = spec.d();
    let mut x = vec![0.0; d];
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        sample_mvn(rng, &factor, &mut x);
        data.extend(x.iter().map(|&v| clamp_open(norm_cdf(v))));
    }
    Ok(SampleMatrix::uniform_unchecked(n, d, data))
}

/// Student copula sample: `U_j = T_θ(√(θ/W) (L z)_j)` with `W ~ χ²(θ)`.
pub fn sample_student(spec: &CopulaSpec, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    let (corr, df) = elliptical_parts(spec)?;
    let df = df.ok_or_else(|| Error::constraint(spec.family().name(), "theta > 0 (degrees of freedom)"))?;
    let factor = cholesky(corr)?;
    let d = spec.d();
    let mut x = vec![0.0; d];
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        sample_mvn(rng, &factor, &mut x);
        let scale = (df / sample_chisq(rng, df)).sqrt();
        data.extend(x.iter().map(|&v| clamp_open(student_cdf(scale * v, df))));
    }
    Ok(SampleMatrix::uniform_unchecked(n, d, data))
}
