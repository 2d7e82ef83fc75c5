//! Random vector generation for Archimedean, extreme-value and elliptical
//! copulas, with λ-madogram estimation under missing data.

pub mod archimedean;
pub mod dists;
pub mod elliptical;
pub mod error;
pub mod extreme;
pub mod invariants;
pub mod linalg;
pub mod madogram;
pub mod rng;
pub mod root;
pub mod sampling;
pub mod sample;
pub mod spec;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use linalg::{cholesky, CholeskyFactor, Matrix};
pub use rng::RngStream;
pub use root::brent_root;
pub use sample::{apply_margins, MarginTag, Quantile, SampleMatrix};
pub use spec::{validate_params, Block, CopulaSpec, DirichletMixture, Family, Params, SubsetWeights};
pub use sampling::{copula_cdf, cond_cdf, sample_cond_bivariate, sample_unimargin};
