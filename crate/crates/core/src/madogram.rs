//! λ-madogram estimation under data missing completely at random.
//!
//! With `λ` the weight of coordinate 1, the madogram is
//! `ν(λ) = ½ E|F0(X0)^{1/(1−λ)} − F1(X1)^{1/λ}| = A(λ)/(1 + A(λ)) − c(λ)`,
//! `c(λ) = ½ (λ/(1+λ) + (1−λ)/(2−λ))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extreme::pickands2;
use crate::rng::RngStream;
use crate::sample::SampleMatrix;
use crate::sampling::{copula_cdf, sample_unimargin};
use crate::spec::CopulaSpec;
use crate::stats::moments;

/// Range to which `λ` is clipped before estimation.
pub const LAMBDA_RANGE: (f64, f64) = (0.01, 0.99);

const DENOM_TOL: f64 = 1e-12;

/// Observation indicators for a bivariate sample.
#[derive(Clone, Debug, PartialEq)]
pub struct MissingMask {
    observed: Vec<[bool; 2]>,
    p0: f64,
    p1: f64,
    p: f64,
}

impl MissingMask {
    /// Every entry observed.
    pub fn full(n: usize) -> Self {
        Self {
            observed: vec![[true, true]; n],
            p0: 1.0,
            p1: 1.0,
            p: 1.0,
        }
    }

    pub fn from_indicators(observed: Vec<[bool; 2]>, p0: f64, p1: f64, p: f64) -> Self {
        Self { observed, p0, p1, p }
    }

    pub fn n(&self) -> usize {
        self.observed.len()
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[i][j]
    }

    pub fn indicators(&self) -> &[[bool; 2]] {
        &self.observed
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    /// Probability of a complete pair, `C_miss(p0, p1)`.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn column_rate(&self, j: usize) -> f64 {
        self.observed.iter().filter(|o| o[j]).count() as f64 / self.n() as f64
    }

    pub fn complete_rate(&self) -> f64 {
        self.complete_count() as f64 / self.n() as f64
    }

    pub fn complete_count(&self) -> usize {
        self.observed.iter().filter(|o| o[0] && o[1]).count()
    }
}

/// Draws `(V0, V1)` from `miss` and observes coordinate `j` when `V_j ≤ p_j`.
pub fn gen_missing_mask(rng: &mut RngStream, miss: &CopulaSpec, p0: f64, p1: f64, n: usize) -> Result<MissingMask> {
    if miss.d() != 2 {
        return Err(Error::DimensionUnsupported {
            family: miss.family().name().into(),
            d: miss.d(),
            reason: "missingness copula must be bivariate".into(),
        });
    }
    for (name, v) in [("p0", p0), ("p1", p1)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::domain(format!("{name} = {v} is outside (0, 1]")));
        }
    }
    let p = copula_cdf(miss, &[p0, p1])?;
    let v = sample_unimargin(miss, n, rng)?;
    let observed = v.rows().map(|r| [r[0] <= p0, r[1] <= p1]).collect();
    Ok(MissingMask { observed, p0, p1, p })
}

/// `c(λ) = ½ (λ/(1+λ) + (1−λ)/(2−λ))`.
pub fn madogram_offset(lambda: f64) -> f64 {
    0.5 * (lambda / (1.0 + lambda) + (1.0 - lambda) / (2.0 - lambda))
}

fn check_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda = {lambda} is outside (0, 1)")));
    }
    Ok(lambda.clamp(LAMBDA_RANGE.0, LAMBDA_RANGE.1))
}

/// `ν(λ) = A(λ)/(1+A(λ)) − c(λ)` for a bivariate extreme-value copula.
pub fn true_madogram(spec: &CopulaSpec, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda = {lambda} is outside (0, 1)")));
    }
    let a = pickands2(spec, lambda)?;
    Ok(a / (1.0 + a) - madogram_offset(lambda))
}

/// Inverts the madogram relation: `A = (ν + c)/(1 − ν − c)`, clamped to `[max(λ, 1−λ), 1]`.
pub fn pickands_from_madogram(nu: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda = {lambda} is outside (0, 1)")));
    }
    let s = nu + madogram_offset(lambda);
    let denom = 1.0 - s;
    if !(denom > DENOM_TOL) {
        return Err(Error::DegenerateDenominator(denom));
    }
    Ok((s / denom).clamp(lambda.max(1.0 - lambda), 1.0))
}

/// Empirical CDF values `rank / (n_j + 1)` over the observed entries of a column.
fn observed_ecdf(s: &SampleMatrix, mask: &MissingMask, j: usize) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..s.n()).filter(|&i| mask.is_observed(i, j)).collect();
    idx.sort_by(|&a, &b| s.get(a, j).total_cmp(&s.get(b, j)));
    let denom = idx.len() as f64 + 1.0;
    let mut f = vec![f64::NAN; s.n()];
    for (r, &i) in idx.iter().enumerate() {
        f[i] = (r + 1) as f64 / denom;
    }
    f
}

/// Plug-in madogram estimate.
///
/// Margins are ranked among their marginally observed entries and the
/// expectation is averaged over complete pairs. `corrected` clamps the
/// estimate to the range implied by `A(λ) ∈ [max(λ, 1−λ), 1]`.
pub fn estimate_madogram(s: &SampleMatrix, mask: &MissingMask, lambda: f64, corrected: bool) -> Result<f64> {
    if s.d() != 2 {
        return Err(Error::ArityMismatch {
            what: "madogram sample columns".into(),
            expected: 2,
            got: s.d(),
        });
    }
    if mask.n() != s.n() {
        return Err(Error::ArityMismatch {
            what: "mask rows".into(),
            expected: s.n(),
            got: mask.n(),
        });
    }
    let lambda = check_lambda(lambda)?;
    let complete = mask.complete_count();
    if complete < 2 {
        return Err(Error::InsufficientData(format!("{complete} complete pairs, need at least 2")));
    }
    let f0 = observed_ecdf(s, mask, 0);
    let f1 = observed_ecdf(s, mask, 1);
    let (e0, e1) = (1.0 / (1.0 - lambda), 1.0 / lambda);
    let mut sum = 0.0;
    for i in 0..s.n() {
        if mask.is_observed(i, 0) && mask.is_observed(i, 1) {
            sum += (f0[i].powf(e0) - f1[i].powf(e1)).abs();
        }
    }
    let nu = 0.5 * sum / complete as f64;
    if !corrected {
        return Ok(nu);
    }
    let c = madogram_offset(lambda);
    let lo_a = lambda.max(1.0 - lambda);
    Ok(nu.clamp(lo_a / (1.0 + lo_a) - c, 0.5 - c))
}

/// One row of Monte Carlo output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MadoRecord {
    #[serde(rename = "FMado")]
    pub fmado: f64,
    pub n: usize,
    /// `√n (ν̂ − ν)`.
    pub scaled: f64,
}

/// Monte Carlo experiment: replicate sample → mask → estimate.
#[derive(Clone, Debug)]
pub struct MonteCarloConfig {
    pub n_iter: usize,
    pub n_sample: usize,
    pub target: CopulaSpec,
    /// Missingness copula; `None` observes everything.
    pub miss: Option<CopulaSpec>,
    pub p0: f64,
    pub p1: f64,
    pub lambda: f64,
    pub corrected: bool,
    pub seed: u64,
}

/// Runs `n_iter` replications; iteration `i` draws from child stream `i` of the seed.
pub fn monte_carlo_run(cfg: &MonteCarloConfig) -> Result<Vec<MadoRecord>> {
    if cfg.target.d() != 2 {
        return Err(Error::DimensionUnsupported {
            family: cfg.target.family().name().into(),
            d: cfg.target.d(),
            reason: "madogram is bivariate".into(),
        });
    }
    let nu_true = true_madogram(&cfg.target, cfg.lambda)?;
    let root = RngStream::new(cfg.seed);
    let sqrt_n = (cfg.n_sample as f64).sqrt();
    (0..cfg.n_iter)
        .map(|i| {
            let mut rng = root.child(i as u64);
            let run = |rng: &mut RngStream| -> Result<MadoRecord> {
                let s = sample_unimargin(&cfg.target, cfg.n_sample, rng)?;
                let mask = match &cfg.miss {
                    Some(m) => gen_missing_mask(rng, m, cfg.p0, cfg.p1, cfg.n_sample)?,
                    None => MissingMask::full(cfg.n_sample),
                };
                let fmado = estimate_madogram(&s, &mask, cfg.lambda, cfg.corrected)?;
                Ok(MadoRecord {
                    fmado,
                    n: cfg.n_sample,
                    scaled: sqrt_n * (fmado - nu_true),
                })
            };
            run(&mut rng).map_err(|e| Error::IterationFailed {
                iteration: i,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Fixed-width histogram.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub width: f64,
    pub counts: Vec<usize>,
}

/// Moment summary of the scaled estimates, for checking asymptotic normality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalityDiagnostics {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub degenerate: bool,
    pub histogram: Histogram,
}

/// Smallest input accepted by [`normality_diagnostics`].
pub const MIN_DIAGNOSTIC_RECORDS: usize = 100;

pub fn normality_diagnostics(x: &[f64]) -> Result<NormalityDiagnostics> {
    if x.len() < MIN_DIAGNOSTIC_RECORDS {
        return Err(Error::InsufficientData(format!(
            "{} records, need at least {MIN_DIAGNOSTIC_RECORDS}",
            x.len()
        )));
    }
    let m = moments(x);
    let degenerate = !(m.variance > 0.0);
    let bins = (x.len() as f64).sqrt().ceil() as usize;
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut counts = vec![0usize; bins];
    let width = if degenerate { 0.0 } else { (hi - lo) / bins as f64 };
    for &v in x {
        let k = if degenerate {
            0
        } else {
            (((v - lo) / width) as usize).min(bins - 1)
        };
        counts[k] += 1;
    }
    Ok(NormalityDiagnostics {
        count: x.len(),
        mean: m.mean,
        variance: m.variance,
        skewness: m.skewness,
        excess_kurtosis: m.excess_kurtosis,
        degenerate,
        histogram: Histogram { lo, width, counts },
    })
}
