//! JSON run configuration.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use copula_forge::{Block, CopulaSpec, DirichletMixture, Family, Matrix, Quantile, SubsetWeights};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub members: Vec<usize>,
    #[serde(default = "one")]
    pub theta: f64,
    pub weights: Vec<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureConfig {
    pub weights: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
}

/// Copula family and parameters.
///
/// Scalar families use `params` in the layout of `validate_params`; matrix
/// parameters go in `corr` (+ `df`), `gamma`, `subsets` or `mixture`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CopulaConfig {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
    pub d: Option<usize>,
    pub corr: Option<Vec<Vec<f64>>>,
    pub df: Option<f64>,
    pub gamma: Option<Vec<Vec<f64>>>,
    pub subsets: Option<Vec<BlockConfig>>,
    pub mixture: Option<MixtureConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginName {
    Uniform,
    StdNormal,
    StdExponential,
}

impl MarginName {
    pub fn quantile(self) -> Quantile {
        match self {
            MarginName::Uniform => Quantile::Identity,
            MarginName::StdNormal => Quantile::StdNormal,
            MarginName::StdExponential => Quantile::StdExponential,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissingConfig {
    pub copula: CopulaConfig,
    pub p0: f64,
    pub p1: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub copula: CopulaConfig,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub margins: Vec<MarginName>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub plot: bool,
    pub missing: Option<MissingConfig>,
    pub lambda: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    #[serde(default = "default_n_iter")]
    pub n_iter: usize,
    #[serde(default = "default_corrected")]
    pub corrected: bool,
    pub diagnostics: Option<PathBuf>,
}

fn default_n() -> usize {
    1024
}

fn default_n_iter() -> usize {
    1024
}

fn default_corrected() -> bool {
    true
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn spec(&self) -> Result<CopulaSpec, CliError> {
        self.copula.build("copula")
    }

    pub fn quantiles(&self, d: usize) -> Result<Vec<Quantile>, CliError> {
        match self.margins.len() {
            0 => Ok(vec![Quantile::Identity; d]),
            k if k == d => Ok(self.margins.iter().map(|m| m.quantile()).collect()),
            k => Err(CliError::Config(format!("margins: expected {d} entries, got {k}"))),
        }
    }
}

fn matrix(field: &str, rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    Matrix::from_rows(rows).map_err(|e| CliError::invalid(field, e))
}

impl CopulaConfig {
    /// Validates the parameters; errors are prefixed with the field path `at`.
    pub fn build(&self, at: &str) -> Result<CopulaSpec, CliError> {
        let family =
            Family::from_str(&self.family).map_err(|e| CliError::invalid(&format!("{at}.family"), e))?;
        let spec = if let Some(rows) = &self.corr {
            let corr = matrix(&format!("{at}.corr"), rows)?;
            match (family, self.df) {
                (Family::Gaussian, None) => CopulaSpec::gaussian(corr),
                (Family::Student, Some(df)) => CopulaSpec::student(corr, df),
                (Family::Student, None) => {
                    return Err(CliError::Config(format!("{at}.df: student copula needs degrees of freedom")))
                }
                _ => return Err(CliError::Config(format!("{at}.corr: only gaussian and student take a matrix"))),
            }
            .map_err(|e| CliError::invalid(&format!("{at}.corr"), e))?
        } else if let Some(rows) = &self.gamma {
            if family != Family::HuslerReiss {
                return Err(CliError::Config(format!("{at}.gamma: only husler_reiss takes a variogram")));
            }
            CopulaSpec::husler_reiss(matrix(&format!("{at}.gamma"), rows)?)
                .map_err(|e| CliError::invalid(&format!("{at}.gamma"), e))?
        } else if let Some(blocks) = &self.subsets {
            if family != Family::AsyLogistic {
                return Err(CliError::Config(format!("{at}.subsets: only asy_logistic takes subset weights")));
            }
            let d = self
                .d
                .ok_or_else(|| CliError::Config(format!("{at}.d: required with subsets")))?;
            let blocks = blocks
                .iter()
                .map(|b| Block {
                    members: b.members.clone(),
                    theta: b.theta,
                    weights: b.weights.clone(),
                })
                .collect();
            SubsetWeights::new(d, blocks)
                .and_then(CopulaSpec::asym_logistic)
                .map_err(|e| CliError::invalid(&format!("{at}.subsets"), e))?
        } else if let Some(m) = &self.mixture {
            if family != Family::Dirichlet {
                return Err(CliError::Config(format!("{at}.mixture: only dirichlet takes a mixture")));
            }
            DirichletMixture::new(m.weights.clone(), m.sigma.clone())
                .and_then(CopulaSpec::dirichlet)
                .map_err(|e| CliError::invalid(&format!("{at}.mixture"), e))?
        } else {
            CopulaSpec::new(family, &self.params, self.d.unwrap_or(2))
                .map_err(|e| CliError::invalid(&format!("{at}.params"), e))?
        };
        if let Some(d) = self.d {
            if d != spec.d() {
                return Err(CliError::Config(format!(
                    "{at}.d: {d} does not match the parameter dimension {}",
                    spec.d()
                )));
            }
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = RunConfig::parse(r#"{"copula": {"family": "clayton", "params": [2.0], "d": 3}}"#).unwrap();
        assert_eq!(c.n, 1024);
        assert_eq!(c.spec().unwrap().d(), 3);
    }

    #[test]
    fn unknown_field_is_named() {
        let err = RunConfig::parse(r#"{"copula": {"family": "clayton", "thetta": 2.0}}"#).unwrap_err();
        assert!(err.to_string().contains("thetta"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn matrix_families() {
        let c = RunConfig::parse(
            r#"{"copula": {"family": "student", "corr": [[1, 0.71], [0.71, 1]], "df": 4}}"#,
        )
        .unwrap();
        assert_eq!(c.spec().unwrap().family(), Family::Student);
        let c = RunConfig::parse(
            r#"{"copula": {"family": "dirichlet", "mixture": {"weights": [0.5, 0.5], "sigma": [[2, 1], [1, 2]]}}}"#,
        )
        .unwrap();
        assert_eq!(c.spec().unwrap().d(), 2);
    }

    #[test]
    fn constraint_errors_name_the_field() {
        let c = RunConfig::parse(r#"{"copula": {"family": "joe", "params": [0.5]}}"#).unwrap();
        let msg = c.spec().unwrap_err().to_string();
        assert!(msg.contains("copula.params") && msg.contains("theta >= 1"), "{msg}");
    }
}
