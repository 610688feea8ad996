use serde::{Deserialize, Serialize};

use super::{row_from_unit, run_all, BenchConfig, BenchError, RowOutcome};
use crate::rng::derive_seed;
use crate::sampling::{build_ab, sobol_points};
use crate::sobol_estimators::{bootstrap_percentile, Method, PickFreezeOutputs};

pub const PARAMETER_NAMES: [&str; 9] = ["N_star", "h", "k", "eps", "tau", "phi", "k2", "k3", "delta"];

const BOOTSTRAP_STREAM: u64 = 0xb007;

/// Sobol' indices of one benchmark parameter for the VARS-TO performance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaIndex {
    pub parameter: String,
    #[serde(rename = "Si")]
    pub si: f64,
    #[serde(rename = "Si_lo")]
    pub si_lo: f64,
    #[serde(rename = "Si_hi")]
    pub si_hi: f64,
    #[serde(rename = "Ti")]
    pub ti: f64,
    #[serde(rename = "Ti_lo")]
    pub ti_lo: f64,
    #[serde(rename = "Ti_hi")]
    pub ti_hi: f64,
}

#[derive(Debug, Clone)]
pub struct MetaResult {
    pub indices: Vec<MetaIndex>,
    pub outcomes: Vec<RowOutcome>,
    /// Rows whose `r_vars` was undefined and entered the analysis as 0.
    pub undefined_rows: usize,
}

/// First- and total-order indices of the nine benchmark parameters on
/// `r_vars`, from an `A`, `B`, `A_B^(i)` design of `n_base` rows each
/// (`11 n_base` benchmark rows in total), with percentile bootstrap
/// intervals.
pub fn meta_analysis<F>(
    n_base: usize,
    config: &BenchConfig,
    workers: usize,
    bootstrap_r: usize,
    level: f64,
    on_result: F,
) -> Result<MetaResult, BenchError>
where
    F: FnMut(&RowOutcome),
{
    if !n_base.is_power_of_two() {
        return Err(BenchError::NotPowerOfTwo(n_base));
    }
    let design = build_ab(&sobol_points(n_base, 18, Some(config.master_seed))?)?;
    let mut blocks = vec![design.a().clone(), design.b().clone()];
    blocks.extend((0..9).map(|i| design.ab(i)));
    let rows: Vec<_> = blocks
        .iter()
        .flat_map(|m| m.iter_rows())
        .enumerate()
        .map(|(id, u)| row_from_unit(id, u, config.h_set))
        .collect();

    let outcomes = run_all(&rows, config, workers, on_result)?;
    let mut undefined_rows = 0;
    let y: Vec<f64> = outcomes
        .iter()
        .map(|o| match o.as_ref().ok().and_then(|r| r.r_vars) {
            Some(r) => r,
            None => {
                undefined_rows += 1;
                0.0
            }
        })
        .collect();
    let outputs = PickFreezeOutputs {
        y_a: y[..n_base].to_vec(),
        y_b: Some(y[n_base..2 * n_base].to_vec()),
        y_ab: y[2 * n_base..].chunks(n_base).map(<[f64]>::to_vec).collect(),
    };
    let first = outputs.first()?;
    let total = outputs.total()?;
    let seed = derive_seed(config.master_seed, BOOTSTRAP_STREAM);
    let first_ci = bootstrap_percentile(&outputs, Method::JansenFirst, bootstrap_r, level, seed)?;
    let total_ci =
        bootstrap_percentile(&outputs, Method::JansenTotal, bootstrap_r, level, derive_seed(seed, 1))?;

    let indices = PARAMETER_NAMES
        .iter()
        .enumerate()
        .map(|(i, name)| MetaIndex {
            parameter: (*name).to_string(),
            si: first.values[i],
            si_lo: first_ci[i].lo,
            si_hi: first_ci[i].hi,
            ti: total.values[i],
            ti_lo: total_ci[i].lo,
            ti_hi: total_ci[i].hi,
        })
        .collect();
    Ok(MetaResult {
        indices,
        outcomes,
        undefined_rows,
    })
}
