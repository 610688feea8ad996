//! Global sensitivity analysis with variogram (VARS) and Sobol' estimators.
//!
//! The crate is organised bottom-up:
//!
//! - [`sampling`]: pseudo-random and Sobol' point sets, the pick-freeze
//!   `A`/`B`/`A_B^(i)` design and the STAR-VARS star design.
//! - [`distributions`]: inverse-CDF transforms for the benchmark input
//!   distributions.
//! - [`models`]: analytic test functions, the six-dimensional response
//!   surface with its closed-form variances, Liu's ratio function and the
//!   seeded metafunction.
//! - [`sobol_estimators`] and [`vars_estimators`]: the two estimator families.
//! - [`metrics`]: MAE, probability of failure and correlation measures.
//! - [`bench`]: the randomized matched-budget comparison and its Sobol'
//!   meta-analysis, plus the six-dimensional replication sweeps.

pub mod bench;
pub mod distributions;
pub mod metrics;
pub mod models;
pub mod rng;
pub mod sampling;
pub mod sobol_estimators;
pub mod stats;
pub mod vars_estimators;

pub use distributions::{DistributionSpec, Family};
pub use models::Model;
pub use sampling::{DesignAB, SampleMatrix, StarDesign};
pub use sobol_estimators::{Method, SensitivityEstimate};
pub use vars_estimators::VariogramCurve;
