//! Exact max-stable simulation through extremal functions.
//!
//! For each anchor coordinate `j` the extremal function `Y` has `Y_j = 1`
//! and the law of the spectral process tilted by its `j`-th component.
//! Rows are built on the unit Fréchet scale by the sequential
//! accept/reject scheme over Poisson points, then mapped by `u = exp(−1/z)`.

use crate::dists::{sample_chisq, sample_dirichlet, sample_mvn};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, CholeskyFactor, Matrix};
use crate::rng::RngStream;
use crate::sample::{clamp_open, SampleMatrix};
use crate::spec::{increment_covariance, CopulaSpec, DirichletMixture, Params};

/// Default bound on proposals examined for one coordinate of one row.
pub const DEFAULT_PROPOSAL_CAP: usize = 1_000_000;

enum Law {
    HuslerReiss { gamma: Matrix, factors: Vec<CholeskyFactor> },
    TEv { rho: f64, df: f64 },
    Bilogistic { alpha: f64, beta: f64 },
    Dirichlet { mixture: DirichletMixture, probs: Vec<Vec<f64>> },
}

impl Law {
    fn from_spec(spec: &CopulaSpec) -> Result<Self> {
        let d = spec.d();
        Ok(match spec.params() {
            Params::Variogram(g) => {
                let factors = (0..d)
                    .map(|j| cholesky(&increment_covariance(g, j)))
                    .collect::<Result<Vec<_>>>()?;
                Law::HuslerReiss {
                    gamma: g.clone(),
                    factors,
                }
            }
            &Params::TEv { rho, df } => Law::TEv { rho, df },
            &Params::Bilogistic { alpha, beta } => Law::Bilogistic { alpha, beta },
            Params::Dirichlet(m) => {
                // Mixture probabilities of the anchor-j tilted law: θ_k σ_kj d / |σ_k|.
                let probs = (0..d)
                    .map(|j| {
                        m.weights()
                            .iter()
                            .zip(m.sigma())
                            .map(|(t, row)| t * row[j] * d as f64 / row.iter().sum::<f64>())
                            .collect()
                    })
                    .collect();
                Law::Dirichlet {
                    mixture: m.clone(),
                    probs,
                }
            }
            _ => {
                return Err(Error::NotImplemented(format!(
                    "extremal functions for {}",
                    spec.family()
                )))
            }
        })
    }

    fn draw(&self, j: usize, rng: &mut RngStream, y: &mut [f64]) {
        let d = y.len();
        match self {
            Law::HuslerReiss { gamma, factors } => {
                let mut w = vec![0.0; d - 1];
                sample_mvn(rng, &factors[j], &mut w);
                let mut k = 0;
                for i in 0..d {
                    if i == j {
                        y[i] = 1.0;
                    } else {
                        y[i] = (w[k] - 0.5 * gamma.get(i, j)).exp();
                        k += 1;
                    }
                }
            }
            &Law::TEv { rho, df } => {
                let scale = (1.0 - rho * rho).sqrt();
                for i in 0..d {
                    if i == j {
                        y[i] = 1.0;
                        continue;
                    }
                    let z = rng.normal();
                    let c = sample_chisq(rng, df + 1.0);
                    let t = rho + scale * z / c.sqrt();
                    y[i] = if t > 0.0 { t.powf(df) } else { 0.0 };
                }
            }
            &Law::Bilogistic { alpha, beta } => {
                let ln_u = rng.uniform().ln();
                if j == 1 {
                    let ln_s = ln_u / (1.0 - alpha);
                    let ln_1ms = (-ln_s.exp_m1()).ln();
                    y[1] = 1.0;
                    y[0] = ((1.0 - beta).ln() - beta * ln_1ms - (1.0 - alpha).ln() + alpha * ln_s).exp();
                } else {
                    let ln_1ms = ln_u / (1.0 - beta);
                    let ln_s = (-ln_1ms.exp_m1()).ln();
                    y[0] = 1.0;
                    y[1] = ((1.0 - alpha).ln() - alpha * ln_s - (1.0 - beta).ln() + beta * ln_1ms).exp();
                }
            }
            Law::Dirichlet { mixture, probs } => {
                let p = &probs[j];
                let mut v = rng.uniform();
                let mut k = p.len() - 1;
                for (i, pi) in p.iter().enumerate() {
                    if v < *pi {
                        k = i;
                        break;
                    }
                    v -= pi;
                }
                let mut shape = mixture.sigma()[k].clone();
                shape[j] += 1.0;
                sample_dirichlet(rng, &shape, y);
                let wj = y[j];
                for x in y.iter_mut() {
                    *x /= wj;
                }
                y[j] = 1.0;
            }
        }
    }
}

/// One extremal function anchored at coordinate `j`.
pub fn rext_func(spec: &CopulaSpec, j: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    if j >= spec.d() {
        return Err(Error::domain(format!("anchor {j} is not below d = {}", spec.d())));
    }
    let law = Law::from_spec(spec)?;
    let mut y = vec![0.0; spec.d()];
    law.draw(j, rng, &mut y);
    Ok(y)
}

/// Max-stable sample with uniform margins, capped at [`DEFAULT_PROPOSAL_CAP`].
pub fn sample_extremal_functions(spec: &CopulaSpec, n: usize, rng: &mut RngStream) -> Result<SampleMatrix> {
    sample_extremal_functions_with_cap(spec, n, rng, DEFAULT_PROPOSAL_CAP)
}

/// As [`sample_extremal_functions`] with an explicit proposal cap; exceeding it
/// fails the row with [`Error::IterationCap`] inside [`Error::SamplerFailure`].
pub fn sample_extremal_functions_with_cap(
    spec: &CopulaSpec,
    n: usize,
    rng: &mut RngStream,
    cap: usize,
) -> Result<SampleMatrix> {
    let law = Law::from_spec(spec)?;
    let d = spec.d();
    let mut data = Vec::with_capacity(n * d);
    let mut z = vec![0.0f64; d];
    let mut y = vec![0.0; d];
    for row in 0..n {
        one_row(&law, rng, cap, &mut z, &mut y).map_err(|e| Error::SamplerFailure {
            row,
            source: Box::new(e),
        })?;
        data.extend(z.iter().map(|&zj| clamp_open((-1.0 / zj).exp())));
    }
    Ok(SampleMatrix::uniform_unchecked(n, d, data))
}

fn one_row(law: &Law, rng: &mut RngStream, cap: usize, z: &mut [f64], y: &mut [f64]) -> Result<()> {
    let d = z.len();
    let zeta = 1.0 / rng.exponential();
    law.draw(0, rng, y);
    for (zi, yi) in z.iter_mut().zip(y.iter()) {
        *zi = zeta * yi;
    }
    for j in 1..d {
        let mut e = rng.exponential();
        let mut zeta = 1.0 / e;
        let mut proposals = 0usize;
        while zeta > z[j] {
            proposals += 1;
            if proposals > cap {
                return Err(Error::IterationCap { cap });
            }
            law.draw(j, rng, y);
            if (0..j).all(|i| zeta * y[i] < z[i]) {
                for (zi, yi) in z.iter_mut().zip(y.iter()) {
                    *zi = zi.max(zeta * yi);
                }
            }
            e += rng.exponential();
            zeta = 1.0 / e;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreme::ev_cdf;
    use crate::spec::{validate_params, Family};
    use crate::stats::ks_uniform;

    fn check_against_cdf(spec: &CopulaSpec, seed: u64) {
        let n = 20_000;
        let mut rng = RngStream::new(seed);
        let s = sample_extremal_functions(spec, n, &mut rng).unwrap();
        for j in 0..spec.d() {
            assert!(ks_uniform(&s.column(j)) < 1.628 / (n as f64).sqrt(), "{:?} margin {j}", spec.family());
        }
        if spec.d() == 2 {
            for &(a, b) in &[(0.3, 0.3), (0.5, 0.7), (0.8, 0.4), (0.9, 0.9)] {
                let emp = s.rows().filter(|r| r[0] <= a && r[1] <= b).count() as f64 / n as f64;
                let exact = ev_cdf(spec, &[a, b]).unwrap();
                assert!((emp - exact).abs() < 0.015, "{:?} ({a},{b}) emp {emp} exact {exact}", spec.family());
            }
        }
    }

    #[test]
    fn bivariate_laws_match_cdf() {
        check_against_cdf(&validate_params(Family::HuslerReiss, &[1.0], 2).unwrap(), 21);
        check_against_cdf(&validate_params(Family::TEv, &[0.8, 0.2], 2).unwrap(), 22);
        check_against_cdf(&validate_params(Family::TEv, &[0.3, 2.0], 2).unwrap(), 23);
        check_against_cdf(&validate_params(Family::Bilogistic, &[0.3, 0.6], 2).unwrap(), 24);
    }

    #[test]
    fn multivariate_margins() {
        let g = Matrix::from_rows(&[vec![0.0, 3.0, 3.0], vec![3.0, 0.0, 3.0], vec![3.0, 3.0, 0.0]]).unwrap();
        check_against_cdf(&CopulaSpec::husler_reiss(g).unwrap(), 25);
        let m = DirichletMixture::new(
            vec![1.0 / 3.0; 3],
            vec![vec![2.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]],
        )
        .unwrap();
        check_against_cdf(&CopulaSpec::dirichlet(m).unwrap(), 26);
    }

    #[test]
    fn anchored_coordinate_is_one() {
        let s = validate_params(Family::Bilogistic, &[0.3, 0.6], 2).unwrap();
        let mut rng = RngStream::new(3);
        for j in 0..2 {
            let y = rext_func(&s, j, &mut rng).unwrap();
            assert_eq!(y[j], 1.0);
            assert!(y[1 - j] > 0.0);
        }
    }

    #[test]
    fn tiny_cap_reports_row() {
        let s = validate_params(Family::HuslerReiss, &[1.0], 2).unwrap();
        let mut rng = RngStream::new(4);
        let err = sample_extremal_functions_with_cap(&s, 100, &mut rng, 0).unwrap_err();
        match err {
            Error::SamplerFailure { row: 0, source } => assert_eq!(*source, Error::IterationCap { cap: 0 }),
            e => panic!("unexpected {e:?}"),
        }
    }
}
