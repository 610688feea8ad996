//! Replicated estimation on the six-dimensional model: the single-trajectory
//! estimator against VARS-TO at matched budgets.

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::metrics::{mae, prob_failure};
use crate::models::{sixdim_analytic, sixdim_eval, SixDim};
use crate::rng::derive_seed;
use crate::sampling::{build_stars, grid_len_for, sobol_points};
use crate::sobol_estimators::single_trajectory_first_nodes;
use crate::stats::{is_degenerate_variance, mean, population_variance};
use crate::vars_estimators::{vars_to, LagAggregation};

const K: usize = 6;
const SINGLE_STREAM: u64 = 11;
const VARS_STREAM: u64 = 12;

/// One budget level of a replicate sweep. `single` and `vars` hold PF or
/// MAE depending on the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetPoint {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Nt_single")]
    pub nt_single: usize,
    #[serde(rename = "N_star")]
    pub n_star: usize,
    #[serde(rename = "Nt_vars")]
    pub nt_vars: usize,
    pub single: f64,
    pub vars: f64,
}

/// Single-trajectory estimates from one scrambled `(N, 6)` matrix `A`:
/// `V` from the `N` outputs of `A`, then for each input a trajectory through
/// the first row of `A` with nodes taken from column `i`. Costs `7N` runs.
/// `None` when the outputs of `A` have no variance.
pub fn single_trajectory_replicate(n: usize, seed: u64) -> Result<Option<Vec<f64>>, BenchError> {
    let a = sobol_points(n, K, Some(seed))?;
    let y: Vec<f64> = a.iter_rows().map(sixdim_eval).collect();
    let v = population_variance(&y);
    if is_degenerate_variance(v, mean(&y)) {
        return Ok(None);
    }
    let anchor = a.row(0);
    let values = (0..K)
        .map(|i| single_trajectory_first_nodes(&SixDim, i, anchor, &a.column(i), v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(values))
}

/// VARS-TO from `n_star` scrambled star centers at spacing `h`.
pub fn vars_to_replicate(n_star: usize, h: f64, seed: u64) -> Result<Option<Vec<f64>>, BenchError> {
    let centers = sobol_points(n_star, K, Some(seed))?;
    let design = build_stars(&centers, h)?;
    let y = design.evaluate(|_, u| u, sixdim_eval);
    let est = vars_to(&design, &y, LagAggregation::MeanOverLags)?.estimate;
    Ok((!est.degenerate).then_some(est.values))
}

fn budget_point(n: usize, h: f64) -> Result<BudgetPoint, BenchError> {
    let per_star = K * (grid_len_for(h)? - 1) + 1;
    let nt_single = n * (K + 1);
    let n_star = ((nt_single as f64 / per_star as f64).round() as usize).max(1);
    Ok(BudgetPoint {
        n,
        nt_single,
        n_star,
        nt_vars: n_star * per_star,
        single: f64::NAN,
        vars: f64::NAN,
    })
}

type Replicates = Vec<Vec<f64>>;

fn replicates(
    point: &BudgetPoint,
    h: f64,
    count: usize,
    seed: u64,
) -> Result<(Replicates, Replicates), BenchError> {
    let mut single = Vec::with_capacity(count);
    let mut vars = Vec::with_capacity(count);
    // degenerate replicates enter as NaN vectors, which score as failures
    for v in 0..count as u64 {
        let s = single_trajectory_replicate(point.n, derive_seed(derive_seed(seed, SINGLE_STREAM), v))?;
        single.push(s.unwrap_or_else(|| vec![f64::NAN; K]));
        let t = vars_to_replicate(point.n_star, h, derive_seed(derive_seed(seed, VARS_STREAM), v))?;
        vars.push(t.unwrap_or_else(|| vec![f64::NAN; K]));
    }
    Ok((single, vars))
}

/// Probability of failure against the analytic indices at each base size
/// in `ns` (single-trajectory budget `7N`; VARS-TO at the nearest whole
/// number of stars).
pub fn fig4a_pf(
    ns: &[usize],
    h: f64,
    count: usize,
    seed: u64,
    tie_tolerance: f64,
) -> Result<Vec<BudgetPoint>, BenchError> {
    let truth = sixdim_analytic().s;
    ns.iter()
        .map(|&n| {
            let mut p = budget_point(n, h)?;
            let (single, vars) = replicates(&p, h, count, seed)?;
            p.single = prob_failure(&truth, &single, tie_tolerance)?;
            p.vars = prob_failure(&truth, &vars, tie_tolerance)?;
            Ok(p)
        })
        .collect()
}

/// Mean absolute error against the analytic indices at each base size.
pub fn fig4b_mae(ns: &[usize], h: f64, count: usize, seed: u64) -> Result<Vec<BudgetPoint>, BenchError> {
    let truth = sixdim_analytic().s;
    ns.iter()
        .map(|&n| {
            let mut p = budget_point(n, h)?;
            let (single, vars) = replicates(&p, h, count, seed)?;
            p.single = mae(&truth, &single)?;
            p.vars = mae(&truth, &vars)?;
            Ok(p)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width histogram over `[lo, hi]`; NaN and out-of-range values are
/// dropped, and `hi` itself falls in the last bin.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<HistogramBin> {
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|b| HistogramBin {
            lo: lo + b as f64 * width,
            hi: lo + (b + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for &v in values {
        if v.is_nan() || v < lo || v > hi {
            continue;
        }
        let b = (((v - lo) / width) as usize).min(bins - 1);
        out[b].count += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets_match_the_grid() {
        let p = budget_point(128, 0.1).unwrap();
        assert_eq!((p.nt_single, p.n_star, p.nt_vars), (896, 16, 880));
    }

    #[test]
    fn replicates_are_seeded() {
        assert_eq!(
            single_trajectory_replicate(32, 4).unwrap(),
            single_trajectory_replicate(32, 4).unwrap()
        );
        let s = single_trajectory_replicate(32, 4).unwrap().unwrap();
        assert_eq!(s[5], 0.0);
    }

    #[test]
    fn histogram_counts() {
        let h = histogram(&[-1.0, 0.0, 0.5, 1.0, f64::NAN, 2.0], -1.0, 1.0, 4);
        assert_eq!(h.iter().map(|b| b.count).collect::<Vec<_>>(), vec![1, 0, 1, 2]);
    }
}
