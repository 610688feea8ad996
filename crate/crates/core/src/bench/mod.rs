//! Randomized matched-budget comparison of VARS-TO and the Jansen
//! total-order estimator, its Sobol' meta-analysis, and the replication
//! sweeps on the six-dimensional model.
//!
//! A benchmark row fixes nine parameters: `N_star`, `h`, `k`, `ε` (the
//! metafunction seed), `τ` (sampler), `φ` (input distribution), `k2`, `k3`
//! (interaction fractions) and `δ` (correlation measure).

mod meta;
mod replicate;
mod run;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::DistributionError;
use crate::metrics::MetricsError;
use crate::models::ModelError;
use crate::sampling::{sobol_points, SamplingError};
use crate::sobol_estimators::EstimatorError;
use crate::vars_estimators::VarsError;

pub use meta::{meta_analysis, MetaIndex, MetaResult, PARAMETER_NAMES};
pub use replicate::{
    fig4a_pf, fig4b_mae, histogram, single_trajectory_replicate, vars_to_replicate, BudgetPoint,
    HistogramBin,
};
pub use run::{run_all, run_row, BenchmarkRecord, RowModel, RowOutcome, RowResult};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Vars(#[from] VarsError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("invalid benchmark row: {0}")]
    InvalidRow(String),
    #[error("{0} must be a power of two")]
    NotPowerOfTwo(usize),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// The level set for `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HSet {
    /// `{0.01, 0.05, 0.1, 0.2}`
    #[default]
    Table1,
    /// `{0.02, 0.05, 0.1, 0.2}`
    Supplementary,
}

impl HSet {
    pub fn levels(self) -> [f64; 4] {
        match self {
            HSet::Table1 => [0.01, 0.05, 0.1, 0.2],
            HSet::Supplementary => [0.02, 0.05, 0.1, 0.2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub id: usize,
    pub n_star: usize,
    pub h: f64,
    pub k: usize,
    pub eps: u64,
    pub tau: u8,
    pub phi: u8,
    pub k2: f64,
    pub k3: f64,
    pub delta: u8,
}

/// Settings shared by every row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub master_seed: u64,
    /// Base sample size of the reference Jansen estimate.
    pub truth_n: usize,
    pub h_set: HSet,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            truth_n: 1 << 12,
            h_set: HSet::Table1,
        }
    }
}

/// STAR-VARS cost `N_star [k (1/h - 1) + 1]`.
pub fn vars_budget(n_star: usize, k: usize, h: f64) -> Result<usize, SamplingError> {
    let n = crate::sampling::grid_len_for(h)?;
    Ok(n_star * (k * (n - 1) + 1))
}

/// Jansen base size `N = max(2, round(N_t / (k + 1)))`.
pub fn jansen_base_n(nt_vars: usize, k: usize) -> usize {
    ((nt_vars as f64 / (k + 1) as f64).round() as usize).max(2)
}

/// `(N_t_vars, N, N_t_jansen)` for a row.
pub fn matched_budgets(row: &BenchmarkRow) -> Result<(usize, usize, usize), SamplingError> {
    let nt_vars = vars_budget(row.n_star, row.k, row.h)?;
    let n = jansen_base_n(nt_vars, row.k);
    Ok((nt_vars, n, n * (row.k + 1)))
}

fn bin(u: f64, levels: usize) -> usize {
    ((u * levels as f64) as usize).min(levels - 1)
}

fn grid_level(u: f64, lo: f64, hi: f64, step: f64) -> f64 {
    let levels = ((hi - lo) / step).round() as usize + 1;
    let j = bin(u, levels);
    // round to the grid so printed values are clean
    ((lo + j as f64 * step) * 100.0).round() / 100.0
}

/// Map a point of `[0, 1)^9` onto the discrete parameter levels.
pub fn row_from_unit(id: usize, u: &[f64], h_set: HSet) -> BenchmarkRow {
    assert_eq!(u.len(), 9, "benchmark rows have nine parameters");
    BenchmarkRow {
        id,
        n_star: 3 + bin(u[0], 48),
        h: h_set.levels()[bin(u[1], 4)],
        k: 3 + bin(u[2], 48),
        eps: 1 + bin(u[3], 200) as u64,
        tau: 1 + bin(u[4], 2) as u8,
        phi: 1 + bin(u[5], 8) as u8,
        k2: grid_level(u[6], 0.5, 1.0, 0.05),
        k3: grid_level(u[7], 0.3, 1.0, 0.05),
        delta: 1 + bin(u[8], 3) as u8,
    }
}

/// `n` rows from a digitally shifted 9-dimensional Sobol' set.
pub fn sample_rows(n: usize, master_seed: u64, h_set: HSet) -> Vec<BenchmarkRow> {
    let points = sobol_points(n, 9, Some(master_seed)).expect("9 dimensions are in the table");
    points
        .iter_rows()
        .enumerate()
        .map(|(id, u)| row_from_unit(id, u, h_set))
        .collect()
}
