//! Sample containers and margin transforms.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::norm_quantile;

/// Whether the columns of a sample are still on the uniform scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MarginTag {
    Uniform01,
    Transformed,
}

/// `n × d` sample stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMatrix {
    n: usize,
    d: usize,
    data: Vec<f64>,
    margin_tag: MarginTag,
}

impl SampleMatrix {
    pub fn from_rows(rows: &[Vec<f64>], margin_tag: MarginTag) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * d);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::ArityMismatch {
                    what: format!("sample row {i}"),
                    expected: d,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(rows.len(), d, data, margin_tag)
    }

    pub fn from_vec(n: usize, d: usize, data: Vec<f64>, margin_tag: MarginTag) -> Result<Self> {
        if data.len() != n * d {
            return Err(Error::ArityMismatch {
                what: "sample data".into(),
                expected: n * d,
                got: data.len(),
            });
        }
        if margin_tag == MarginTag::Uniform01 {
            if let Some(bad) = data.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
                return Err(Error::domain(format!("uniform-margin sample contains {bad}")));
            }
        }
        Ok(Self {
            n,
            d,
            data,
            margin_tag,
        })
    }

    /// Builds a uniform-margin sample from draws the sampler guarantees lie in (0, 1).
    pub(crate) fn uniform_unchecked(n: usize, d: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * d);
        Self {
            n,
            d,
            data,
            margin_tag: MarginTag::Uniform01,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn margin_tag(&self) -> MarginTag {
        self.margin_tag
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.d + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.d.max(1)).take(self.n)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

/// Pushes a value into the open unit interval; guards uniforms that rounded to 0 or 1.
#[inline]
pub(crate) fn clamp_open(u: f64) -> f64 {
    u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// Quantile function used to move a uniform column onto another scale.
#[derive(Clone)]
pub enum Quantile {
    Identity,
    StdNormal,
    StdExponential,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Quantile {
    pub fn eval(&self, p: f64) -> f64 {
        match self {
            Quantile::Identity => p,
            Quantile::StdNormal => norm_quantile(p),
            Quantile::StdExponential => -(-p).ln_1p(),
            Quantile::Custom(f) => f(p),
        }
    }
}

impl fmt::Debug for Quantile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantile::Identity => f.write_str("Identity"),
            Quantile::StdNormal => f.write_str("StdNormal"),
            Quantile::StdExponential => f.write_str("StdExponential"),
            Quantile::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// Applies `q[j]` entrywise to column `j` of a uniform-margin sample.
pub fn apply_margins(u: &SampleMatrix, q: &[Quantile]) -> Result<SampleMatrix> {
    if q.len() != u.d() {
        return Err(Error::ArityMismatch {
            what: "quantile functions".into(),
            expected: u.d(),
            got: q.len(),
        });
    }
    if u.margin_tag() != MarginTag::Uniform01 {
        return Err(Error::domain("apply_margins expects a uniform-margin sample"));
    }
    let d = u.d();
    let data = u
        .data()
        .iter()
        .enumerate()
        .map(|(k, &x)| q[k % d].eval(x))
        .collect();
    Ok(SampleMatrix {
        n: u.n(),
        d,
        data,
        margin_tag: MarginTag::Transformed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SampleMatrix {
        SampleMatrix::from_rows(
            &[vec![0.1, 0.7], vec![0.5, 0.2], vec![0.9, 0.4]],
            MarginTag::Uniform01,
        )
        .unwrap()
    }

    #[test]
    fn identity_margins_preserve_values() {
        let s = small();
        let t = apply_margins(&s, &[Quantile::Identity, Quantile::Identity]).unwrap();
        assert_eq!(t.data(), s.data());
        assert_eq!(t.margin_tag(), MarginTag::Transformed);
    }

    #[test]
    fn named_quantiles() {
        let s = small();
        let t = apply_margins(&s, &[Quantile::StdNormal, Quantile::StdExponential]).unwrap();
        assert!((t.get(1, 0)).abs() < 1e-15);
        assert!((t.get(1, 1) + (0.8f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn wrong_quantile_count() {
        let err = apply_margins(&small(), &[Quantile::Identity]).unwrap_err();
        assert!(matches!(err, Error::ArityMismatch { expected: 2, got: 1, .. }));
    }

    #[test]
    fn uniform_tag_rejects_closed_endpoints() {
        assert!(SampleMatrix::from_rows(&[vec![0.0, 0.5]], MarginTag::Uniform01).is_err());
        assert!(SampleMatrix::from_rows(&[vec![0.0, 0.5]], MarginTag::Transformed).is_ok());
    }

    #[test]
    fn columns_and_rows() {
        let s = small();
        assert_eq!(s.column(1), vec![0.7, 0.2, 0.4]);
        assert_eq!(s.row(2), &[0.9, 0.4]);
        assert_eq!(s.rows().count(), 3);
    }
}
