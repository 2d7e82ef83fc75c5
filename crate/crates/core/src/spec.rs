//! Family catalog, parameter constraints and the validated `CopulaSpec` handle.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, Matrix};

/// Every copula family the library knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Clayton,
    Amh,
    Frank,
    Joe,
    Nelsen9,
    Nelsen10,
    Nelsen11,
    Nelsen12,
    Nelsen13,
    Nelsen14,
    Nelsen15,
    Nelsen22,
    /// Gumbel / logistic: Archimedean with generator `(−ln t)^{1/θ}` and
    /// extreme-value with `A(w) = (Σ w_j^{1/θ})^θ`, `θ ∈ (0, 1]`.
    Gumbel,
    Galambos,
    AsyLogistic,
    AsyNegLogistic,
    AsyMixed,
    HuslerReiss,
    TEv,
    Bilogistic,
    Dirichlet,
    Gaussian,
    Student,
}

impl Family {
    pub const ALL: [Family; 23] = [
        Family::Clayton,
        Family::Amh,
        Family::Frank,
        Family::Joe,
        Family::Nelsen9,
        Family::Nelsen10,
        Family::Nelsen11,
        Family::Nelsen12,
        Family::Nelsen13,
        Family::Nelsen14,
        Family::Nelsen15,
        Family::Nelsen22,
        Family::Gumbel,
        Family::Galambos,
        Family::AsyLogistic,
        Family::AsyNegLogistic,
        Family::AsyMixed,
        Family::HuslerReiss,
        Family::TEv,
        Family::Bilogistic,
        Family::Dirichlet,
        Family::Gaussian,
        Family::Student,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Clayton => "clayton",
            Family::Amh => "amh",
            Family::Frank => "frank",
            Family::Joe => "joe",
            Family::Nelsen9 => "nelsen9",
            Family::Nelsen10 => "nelsen10",
            Family::Nelsen11 => "nelsen11",
            Family::Nelsen12 => "nelsen12",
            Family::Nelsen13 => "nelsen13",
            Family::Nelsen14 => "nelsen14",
            Family::Nelsen15 => "nelsen15",
            Family::Nelsen22 => "nelsen22",
            Family::Gumbel => "gumbel",
            Family::Galambos => "galambos",
            Family::AsyLogistic => "asy_logistic",
            Family::AsyNegLogistic => "asy_neg_logistic",
            Family::AsyMixed => "asy_mixed",
            Family::HuslerReiss => "husler_reiss",
            Family::TEv => "t_ev",
            Family::Bilogistic => "bilogistic",
            Family::Dirichlet => "dirichlet",
            Family::Gaussian => "gaussian",
            Family::Student => "student",
        }
    }

    /// Has an Archimedean generator (Gumbel included).
    pub fn is_archimedean(self) -> bool {
        matches!(
            self,
            Family::Clayton
                | Family::Amh
                | Family::Frank
                | Family::Joe
                | Family::Nelsen9
                | Family::Nelsen10
                | Family::Nelsen11
                | Family::Nelsen12
                | Family::Nelsen13
                | Family::Nelsen14
                | Family::Nelsen15
                | Family::Nelsen22
                | Family::Gumbel
        )
    }

    /// Is an extreme-value copula (Gumbel included).
    pub fn is_extreme(self) -> bool {
        matches!(
            self,
            Family::Gumbel
                | Family::Galambos
                | Family::AsyLogistic
                | Family::AsyNegLogistic
                | Family::AsyMixed
                | Family::HuslerReiss
                | Family::TEv
                | Family::Bilogistic
                | Family::Dirichlet
        )
    }

    pub fn is_elliptical(self) -> bool {
        matches!(self, Family::Gaussian | Family::Student)
    }

    /// Families implemented only for `d = 2`.
    pub fn bivariate_only(self) -> bool {
        matches!(
            self,
            Family::Nelsen9
                | Family::Nelsen10
                | Family::Nelsen11
                | Family::Nelsen12
                | Family::Nelsen13
                | Family::Nelsen14
                | Family::Nelsen15
                | Family::Nelsen22
                | Family::Galambos
                | Family::AsyNegLogistic
                | Family::AsyMixed
                | Family::TEv
                | Family::Bilogistic
        )
    }

    pub fn available() -> String {
        Family::ALL.iter().map(|f| f.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let alias = match key.as_str() {
            "logistic" => Some(Family::Gumbel),
            "ali_mikhail_haq" => Some(Family::Amh),
            "hr" | "huslerreiss" => Some(Family::HuslerReiss),
            "tev" | "extremal_t" => Some(Family::TEv),
            "normal" => Some(Family::Gaussian),
            "t" => Some(Family::Student),
            _ => None,
        };
        alias
            .or_else(|| Family::ALL.iter().copied().find(|f| f.name() == key))
            .ok_or_else(|| Error::UnknownFamily {
                name: s.to_string(),
                available: Family::available(),
            })
    }
}

/// One block `b` of the asymmetric logistic model: its members, dependence
/// parameter `θ_b ∈ (0, 1]` and the weights `ψ_{j,b}` aligned with `members`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub members: Vec<usize>,
    pub theta: f64,
    pub weights: Vec<f64>,
}

/// Asymmetric logistic weights over nonempty subsets of `{0, …, d−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetWeights {
    d: usize,
    blocks: Vec<Block>,
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl SubsetWeights {
    pub fn new(d: usize, blocks: Vec<Block>) -> Result<Self> {
        let fam = Family::AsyLogistic.name();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        let mut blocks = blocks;
        for b in blocks.iter_mut() {
            if b.members.is_empty() {
                return Err(Error::constraint(fam, "every block b is a nonempty subset"));
            }
            if b.members.len() != b.weights.len() {
                return Err(Error::ArityMismatch {
                    what: format!("weights of block {:?}", b.members),
                    expected: b.members.len(),
                    got: b.weights.len(),
                });
            }
            let mut sorted = b.members.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != b.members.len() || sorted.iter().any(|&j| j >= d) {
                return Err(Error::constraint(
                    fam,
                    format!("block members {:?} must be distinct indices below d = {d}", b.members),
                ));
            }
            if seen.contains(&sorted) {
                return Err(Error::constraint(fam, format!("block {:?} listed twice", b.members)));
            }
            seen.push(sorted);
            if b.weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
                return Err(Error::constraint(fam, "psi_{j,b} in [0, 1]"));
            }
            if b.members.len() == 1 {
                b.theta = 1.0;
                continue;
            }
            if !(b.theta > 0.0 && b.theta <= 1.0) {
                return Err(Error::constraint(fam, "theta_b in (0, 1] for every non-singleton block"));
            }
            if b.theta == 1.0 && b.weights.iter().any(|&w| w != 0.0) {
                return Err(Error::constraint(fam, "theta_b = 1 implies psi_{j,b} = 0 for all j in b"));
            }
        }
        let s = Self { d, blocks };
        s.check_sums()?;
        Ok(s)
    }

    /// Bivariate Table-style parameters: `θ ≥ 1` and `ψ1` on coordinate 1, `ψ2` on coordinate 0.
    pub(crate) fn from_bivariate(theta: f64, psi1: f64, psi2: f64) -> Self {
        Self {
            d: 2,
            blocks: vec![
                Block {
                    members: vec![0],
                    theta: 1.0,
                    weights: vec![1.0 - psi2],
                },
                Block {
                    members: vec![1],
                    theta: 1.0,
                    weights: vec![1.0 - psi1],
                },
                Block {
                    members: vec![0, 1],
                    theta: 1.0 / theta,
                    weights: vec![psi2, psi1],
                },
            ],
        }
    }

    fn check_sums(&self) -> Result<()> {
        for (j, sum) in self.weight_sums().into_iter().enumerate() {
            if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
                return Err(Error::WeightRowSumViolation { coordinate: j, sum });
            }
        }
        Ok(())
    }

    /// `Σ_{b ∋ j} ψ_{j,b}` for each coordinate `j`.
    pub fn weight_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.d];
        for b in &self.blocks {
            for (&j, &w) in b.members.iter().zip(&b.weights) {
                s[j] += w;
            }
        }
        s
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
}

/// Mixture of `m` Dirichlet spectral densities.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletMixture {
    weights: Vec<f64>,
    sigma: Vec<Vec<f64>>,
}

impl DirichletMixture {
    /// `weights` are the mixture probabilities `θ_k`; `sigma` holds one row of
    /// concentrations per component. Each component's mean, weighted by `θ_k`,
    /// must average to the simplex barycenter so that margins are unit Fréchet.
    pub fn new(weights: Vec<f64>, sigma: Vec<Vec<f64>>) -> Result<Self> {
        let fam = Family::Dirichlet.name();
        if weights.is_empty() || weights.len() != sigma.len() {
            return Err(Error::ArityMismatch {
                what: "dirichlet sigma rows".into(),
                expected: weights.len(),
                got: sigma.len(),
            });
        }
        let d = sigma[0].len();
        if d < 2 || sigma.iter().any(|r| r.len() != d) {
            return Err(Error::constraint(fam, "sigma rows all of equal length d >= 2"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::constraint(fam, "theta_k >= 0"));
        }
        if (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::constraint(fam, "sum of theta_k = 1"));
        }
        if sigma.iter().flatten().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::constraint(fam, "sigma_kj > 0"));
        }
        for j in 0..d {
            let m: f64 = weights
                .iter()
                .zip(&sigma)
                .map(|(t, row)| t * row[j] / row.iter().sum::<f64>())
                .sum();
            if (m - 1.0 / d as f64).abs() > 1e-9 {
                return Err(Error::constraint(
                    fam,
                    format!("sum_k theta_k sigma_kj / |sigma_k| = 1/d (coordinate {j} gives {m})"),
                ));
            }
        }
        Ok(Self { weights, sigma })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sigma(&self) -> &[Vec<f64>] {
        &self.sigma
    }

    pub fn d(&self) -> usize {
        self.sigma[0].len()
    }
}

/// Validated family parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    Theta(f64),
    AsyLogistic { theta: f64, psi1: f64, psi2: f64 },
    AsyNegLogistic { theta: f64, psi1: f64, psi2: f64 },
    AsyMixed { theta: f64, psi1: f64 },
    /// Extremal-t with correlation `rho` and `df` degrees of freedom.
    TEv { rho: f64, df: f64 },
    Bilogistic { alpha: f64, beta: f64 },
    Subsets(SubsetWeights),
    Variogram(Matrix),
    Dirichlet(DirichletMixture),
    Elliptical { corr: Matrix, df: Option<f64> },
}

/// A family together with parameters that satisfy its constraint set.
#[derive(Clone, Debug, PartialEq)]
pub struct CopulaSpec {
    family: Family,
    params: Params,
    d: usize,
}

impl CopulaSpec {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The scalar `θ` of one-parameter families.
    pub fn theta(&self) -> Option<f64> {
        match self.params {
            Params::Theta(t) => Some(t),
            _ => None,
        }
    }

    /// Same as `validate_params`.
    pub fn new(family: Family, params: &[f64], d: usize) -> Result<Self> {
        validate_params(family, params, d)
    }

    /// Multivariate asymmetric logistic from explicit subset weights.
    pub fn asym_logistic(weights: SubsetWeights) -> Result<Self> {
        let d = weights.d();
        check_dimension(Family::AsyLogistic, d)?;
        Ok(Self {
            family: Family::AsyLogistic,
            params: Params::Subsets(weights),
            d,
        })
    }

    /// Hüsler–Reiss from its variogram matrix `Γ`.
    pub fn husler_reiss(gamma: Matrix) -> Result<Self> {
        let d = gamma.dim();
        check_dimension(Family::HuslerReiss, d)?;
        validate_variogram(&gamma)?;
        Ok(Self {
            family: Family::HuslerReiss,
            params: Params::Variogram(gamma),
            d,
        })
    }

    pub fn dirichlet(mixture: DirichletMixture) -> Result<Self> {
        let d = mixture.d();
        check_dimension(Family::Dirichlet, d)?;
        Ok(Self {
            family: Family::Dirichlet,
            params: Params::Dirichlet(mixture),
            d,
        })
    }

    pub fn gaussian(corr: Matrix) -> Result<Self> {
        Self::elliptical(Family::Gaussian, corr, None)
    }

    pub fn student(corr: Matrix, df: f64) -> Result<Self> {
        Self::elliptical(Family::Student, corr, Some(df))
    }

    fn elliptical(family: Family, corr: Matrix, df: Option<f64>) -> Result<Self> {
        let d = corr.dim();
        check_dimension(family, d)?;
        if let Some(df) = df {
            if !(df.is_finite() && df > 0.0) {
                return Err(Error::constraint(family.name(), "theta > 0 (degrees of freedom)"));
            }
        }
        let corr = normalize_correlation(family, corr)?;
        Ok(Self {
            family,
            params: Params::Elliptical { corr, df },
            d,
        })
    }

    /// Bivariate asymmetric logistic parameters expressed as subset weights.
    pub fn subset_weights(&self) -> Option<SubsetWeights> {
        match &self.params {
            Params::Subsets(w) => Some(w.clone()),
            &Params::AsyLogistic { theta, psi1, psi2 } => {
                Some(SubsetWeights::from_bivariate(theta, psi1, psi2))
            }
            _ => None,
        }
    }
}

fn check_dimension(family: Family, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionUnsupported {
            family: family.name().into(),
            d,
            reason: "copulas need d >= 2".into(),
        });
    }
    if d > 2 && family.bivariate_only() {
        return Err(Error::DimensionUnsupported {
            family: family.name().into(),
            d,
            reason: "family is implemented only for d = 2".into(),
        });
    }
    Ok(())
}

fn arity(family: Family) -> Option<usize> {
    match family {
        Family::AsyLogistic | Family::AsyNegLogistic => Some(3),
        Family::AsyMixed | Family::TEv | Family::Bilogistic | Family::Student => Some(2),
        Family::Dirichlet => None,
        _ => Some(1),
    }
}

/// Checks `params` against the family's constraint set and builds a spec.
///
/// Scalar parameter layouts: one-parameter families take `[θ]`; asymmetric
/// logistic and asymmetric negative logistic take `[θ, ψ1, ψ2]`; asymmetric
/// mixed `[θ, ψ1]`; t-EV `[ρ, ν]`; bilogistic `[α, β]`; Hüsler–Reiss `[θ]`
/// (every off-diagonal variogram entry `4θ²`); Gaussian `[ρ]` and Student
/// `[ρ, ν]` build an equicorrelation matrix. The Dirichlet mixture and general
/// matrices go through the dedicated constructors on `CopulaSpec`.
pub fn validate_params(family: Family, params: &[f64], d: usize) -> Result<CopulaSpec> {
    check_dimension(family, d)?;
    let expected = arity(family).ok_or_else(|| Error::ArityMismatch {
        what: format!("{family} scalar parameters (use the mixture constructor)"),
        expected: 0,
        got: params.len(),
    })?;
    if params.len() != expected {
        return Err(Error::ArityMismatch {
            what: format!("{family} parameters"),
            expected,
            got: params.len(),
        });
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::constraint(family.name(), "parameters are finite"));
    }
    let name = family.name();
    let fail = |c: &str| Err(Error::constraint(name, c));
    let t = params[0];
    let multi = d >= 3;
    let params = match family {
        Family::Clayton => {
            if t < -1.0 {
                return fail("theta >= -1");
            }
            if t == 0.0 {
                return fail("theta != 0");
            }
            if multi && t <= 0.0 {
                return fail("theta > 0 when d >= 3");
            }
            Params::Theta(t)
        }
        Family::Amh => {
            if t < -1.0 {
                return fail("theta >= -1");
            }
            if t >= 1.0 {
                return fail("theta < 1");
            }
            if multi && t < 0.0 {
                return fail("theta >= 0 when d >= 3");
            }
            Params::Theta(t)
        }
        Family::Frank => {
            if t == 0.0 {
                return fail("theta != 0");
            }
            if multi && t < 0.0 {
                return fail("theta > 0 when d >= 3");
            }
            Params::Theta(t)
        }
        Family::Joe => {
            if t < 1.0 {
                return fail("theta >= 1");
            }
            Params::Theta(t)
        }
        Family::Nelsen9 | Family::Nelsen10 | Family::Nelsen22 | Family::Gumbel => {
            if !(t > 0.0 && t <= 1.0) {
                return fail("theta in (0, 1]");
            }
            Params::Theta(t)
        }
        Family::Nelsen11 => {
            if !(t > 0.0 && t <= 0.5) {
                return fail("theta in (0, 0.5]");
            }
            Params::Theta(t)
        }
        Family::Nelsen12 | Family::Nelsen15 => {
            if t < 1.0 {
                return fail("theta >= 1");
            }
            Params::Theta(t)
        }
        Family::Nelsen13 => {
            if t <= 0.0 {
                return fail("theta > 0");
            }
            Params::Theta(t)
        }
        Family::Nelsen14 => {
            if t <= 1.0 {
                return fail("theta > 1");
            }
            Params::Theta(t)
        }
        Family::Galambos => {
            if t < 0.0 {
                return fail("theta >= 0");
            }
            Params::Theta(t)
        }
        Family::AsyLogistic | Family::AsyNegLogistic => {
            let (psi1, psi2) = (params[1], params[2]);
            if family == Family::AsyLogistic && t < 1.0 {
                return fail("theta >= 1");
            }
            if family == Family::AsyNegLogistic && t < 0.0 {
                return fail("theta >= 0");
            }
            if !(psi1 > 0.0 && psi1 <= 1.0) {
                return fail("psi1 in (0, 1]");
            }
            if !(psi2 > 0.0 && psi2 <= 1.0) {
                return fail("psi2 in (0, 1]");
            }
            if family == Family::AsyLogistic {
                Params::AsyLogistic { theta: t, psi1, psi2 }
            } else {
                Params::AsyNegLogistic { theta: t, psi1, psi2 }
            }
        }
        Family::AsyMixed => {
            let psi1 = params[1];
            if t < 0.0 {
                return fail("theta >= 0");
            }
            if t + 3.0 * psi1 < 0.0 {
                return fail("theta + 3 psi1 >= 0");
            }
            if t + psi1 > 1.0 {
                return fail("theta + psi1 <= 1");
            }
            if t + 2.0 * psi1 > 1.0 {
                return fail("theta + 2 psi1 <= 1");
            }
            Params::AsyMixed { theta: t, psi1 }
        }
        Family::HuslerReiss => {
            if t <= 0.0 {
                return fail("theta > 0");
            }
            let mut g = Matrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        g.set(i, j, 4.0 * t * t);
                    }
                }
            }
            Params::Variogram(g)
        }
        Family::TEv => {
            let df = params[1];
            if !(t > -1.0 && t < 1.0) {
                return fail("theta in (-1, 1)");
            }
            if df <= 0.0 {
                return fail("psi1 > 0 (degrees of freedom)");
            }
            Params::TEv { rho: t, df }
        }
        Family::Bilogistic => {
            let beta = params[1];
            if !(t > 0.0 && t < 1.0) {
                return fail("alpha in (0, 1)");
            }
            if !(beta > 0.0 && beta < 1.0) {
                return fail("beta in (0, 1)");
            }
            Params::Bilogistic { alpha: t, beta }
        }
        Family::Gaussian | Family::Student => {
            let lower = -1.0 / (d as f64 - 1.0);
            if !(t > lower && t < 1.0) {
                return fail(&format!(
                    "Sigma positive definite (equicorrelation rho in ({lower}, 1))"
                ));
            }
            let df = if family == Family::Student {
                if params[1] <= 0.0 {
                    return fail("theta > 0 (degrees of freedom)");
                }
                Some(params[1])
            } else {
                None
            };
            Params::Elliptical {
                corr: Matrix::equicorrelation(d, t),
                df,
            }
        }
        Family::Dirichlet => unreachable!("rejected by arity"),
    };
    Ok(CopulaSpec { family, params, d })
}

/// Checks `Γ`: symmetric, zero diagonal, nonnegative and conditionally
/// negative definite (the covariance of increments is positive definite).
pub fn validate_variogram(gamma: &Matrix) -> Result<()> {
    let name = Family::HuslerReiss.name();
    let d = gamma.dim();
    if !gamma.is_symmetric(1e-12) {
        return Err(Error::constraint(name, "Gamma_ij = Gamma_ji"));
    }
    for i in 0..d {
        if gamma.get(i, i) != 0.0 {
            return Err(Error::constraint(name, "Gamma_ii = 0"));
        }
        for j in 0..d {
            if !(gamma.get(i, j) >= 0.0 && gamma.get(i, j).is_finite()) {
                return Err(Error::constraint(name, "Gamma_ij >= 0"));
            }
        }
    }
    cholesky(&increment_covariance(gamma, 0)).map_err(|_| {
        Error::constraint(name, "Gamma strictly conditionally negative definite")
    })?;
    Ok(())
}

/// Covariance of `(W_i − W_k)_{i≠k}` for a Gaussian field with variogram `Γ`:
/// `(Γ_ik + Γ_jk − Γ_ij) / 2`.
pub(crate) fn increment_covariance(gamma: &Matrix, k: usize) -> Matrix {
    let d = gamma.dim();
    let idx: Vec<usize> = (0..d).filter(|&i| i != k).collect();
    let mut s = Matrix::zeros(d - 1);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            s.set(a, b, 0.5 * (gamma.get(i, k) + gamma.get(j, k) - gamma.get(i, j)));
        }
    }
    s
}

fn normalize_correlation(family: Family, corr: Matrix) -> Result<Matrix> {
    let name = family.name();
    let d = corr.dim();
    if !corr.is_symmetric(1e-12) {
        return Err(Error::constraint(name, "Sigma symmetric"));
    }
    let diag: Vec<f64> = (0..d).map(|i| corr.get(i, i)).collect();
    if diag.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::constraint(name, "Sigma positive definite (positive diagonal)"));
    }
    let corr = if diag.iter().any(|v| *v != 1.0) {
        log::warn!("{name}: Sigma has non-unit diagonal; rescaling to a correlation matrix");
        let mut c = Matrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                c.set(i, j, corr.get(i, j) / (diag[i] * diag[j]).sqrt());
            }
        }
        c
    } else {
        corr
    };
    match cholesky(&corr) {
        Ok(_) => Ok(corr),
        Err(Error::NotPositiveDefinite { row, pivot }) => Err(Error::constraint(
            name,
            format!("Sigma positive definite (pivot {pivot:e} at row {row})"),
        )),
        Err(e) => Err(e),
    }
}
