//! Sobol'-family estimators over pick-freeze outputs.
//!
//! With `A_B^(i)` equal to `A` except column `i` (taken from `B`):
//!
//! ```text
//! T_i = (1/2N) Σ (yA - yAB_i)^2 / V            (Jansen total order)
//! S_i = [V - (1/2N) Σ (yB - yAB_i)^2] / V      (Jansen first order)
//! ```
//!
//! `V` is the population variance of `yA`. A zero variance does not raise;
//! it produces an estimate flagged as degenerate whose values are NaN.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::Model;
use crate::rng::stream;
use crate::stats::{is_degenerate_variance, mean, population_variance, quantile_sorted};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("output sequences have mismatched lengths ({expected} vs {got})")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("variance estimate {0} must be positive and finite")]
    NonPositiveVariance(f64),
    #[error("bootstrap needs at least 100 resamples, got {0}")]
    TooFewResamples(usize),
    #[error("confidence level {0} is outside (0, 1)")]
    InvalidLevel(f64),
    #[error("input {0} is out of range")]
    InputOutOfRange(usize),
    #[error("bootstrap resamples kept collapsing to zero variance")]
    DegenerateResamples,
    #[error("pick-freeze outputs carry no yB; first-order indices need it")]
    MissingB,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    JansenTotal,
    JansenFirst,
    SingleTrajectory,
    VarsTo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::JansenTotal => "jansen-total",
            Method::JansenFirst => "jansen-first",
            Method::SingleTrajectory => "single-trajectory",
            Method::VarsTo => "vars-to",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityEstimate {
    pub method: Method,
    /// Raw per-input values. NaN when the estimate is degenerate.
    pub values: Vec<f64>,
    /// Model evaluations consumed.
    pub n_evals: usize,
    /// Output variance used as denominator.
    pub variance: f64,
    pub degenerate: bool,
}

impl SensitivityEstimate {
    pub(crate) fn from_numerators(
        method: Method,
        numerators: Vec<f64>,
        variance: f64,
        output_mean: f64,
        n_evals: usize,
    ) -> Self {
        let degenerate = is_degenerate_variance(variance, output_mean);
        let values = if degenerate {
            vec![f64::NAN; numerators.len()]
        } else {
            numerators.into_iter().map(|n| n / variance).collect()
        };
        Self {
            method,
            values,
            n_evals,
            variance: variance.max(0.0),
            degenerate,
        }
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    /// The index values, or `None` for a degenerate estimate.
    pub fn indices(&self) -> Option<&[f64]> {
        (!self.degenerate).then_some(&self.values)
    }

    /// Values clipped to `[0, 1]`.
    pub fn clipped(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.clamp(0.0, 1.0)).collect()
    }
}

/// Model outputs on `A`, optionally `B`, and each `A_B^(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PickFreezeOutputs {
    pub y_a: Vec<f64>,
    pub y_b: Option<Vec<f64>>,
    pub y_ab: Vec<Vec<f64>>,
}

impl PickFreezeOutputs {
    pub fn n(&self) -> usize {
        self.y_a.len()
    }

    pub fn k(&self) -> usize {
        self.y_ab.len()
    }

    pub fn total(&self) -> Result<SensitivityEstimate, EstimatorError> {
        jansen_total(&self.y_a, &self.y_ab)
    }

    /// First-order indices with `V` taken from `yA`.
    pub fn first(&self) -> Result<SensitivityEstimate, EstimatorError> {
        let y_b = self.y_b.as_ref().ok_or(EstimatorError::MissingB)?;
        let mut est = jansen_first(y_b, &self.y_ab, population_variance(&self.y_a))?;
        est.n_evals += self.n();
        Ok(est)
    }
}

fn check_lengths(reference: &[f64], others: &[Vec<f64>]) -> Result<usize, EstimatorError> {
    let n = reference.len();
    if n < 2 {
        return Err(EstimatorError::TooFewSamples { min: 2, got: n });
    }
    if let Some(bad) = others.iter().find(|o| o.len() != n) {
        return Err(EstimatorError::LengthMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok(n)
}

fn half_mean_sq_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (2.0 * x.len() as f64)
}

/// Jansen total-order indices; records `N (k + 1)` evaluations.
pub fn jansen_total(y_a: &[f64], y_ab: &[Vec<f64>]) -> Result<SensitivityEstimate, EstimatorError> {
    let n = check_lengths(y_a, y_ab)?;
    let numerators = y_ab.iter().map(|col| half_mean_sq_diff(y_a, col)).collect();
    Ok(SensitivityEstimate::from_numerators(
        Method::JansenTotal,
        numerators,
        population_variance(y_a),
        mean(y_a),
        n * (y_ab.len() + 1),
    ))
}

/// Jansen first-order indices against a supplied variance `v_hat`; records
/// the `N (k + 1)` evaluations of `B` and the `A_B^(i)`.
pub fn jansen_first(
    y_b: &[f64],
    y_ab: &[Vec<f64>],
    v_hat: f64,
) -> Result<SensitivityEstimate, EstimatorError> {
    let n = check_lengths(y_b, y_ab)?;
    let numerators = y_ab.iter().map(|col| v_hat - half_mean_sq_diff(y_b, col)).collect();
    Ok(SensitivityEstimate::from_numerators(
        Method::JansenFirst,
        numerators,
        v_hat,
        mean(y_b),
        n * (y_ab.len() + 1),
    ))
}

/// First-order index of input `i` from one trajectory along `x_i` through
/// `anchor`, with midpoint nodes `(j + 0.5) / grid_n`.
///
/// Exact for models additive in `x_i`, whatever the anchor.
pub fn single_trajectory_first<M: Model + ?Sized>(
    model: &M,
    i: usize,
    anchor: &[f64],
    grid_n: usize,
    v_hat: f64,
) -> Result<f64, EstimatorError> {
    if grid_n < 8 {
        return Err(EstimatorError::TooFewSamples { min: 8, got: grid_n });
    }
    let nodes: Vec<f64> = (0..grid_n).map(|j| (j as f64 + 0.5) / grid_n as f64).collect();
    single_trajectory_first_nodes(model, i, anchor, &nodes, v_hat)
}

/// As [`single_trajectory_first`] but over caller-supplied nodes along `x_i`
/// (e.g. one column of a quasi-random matrix).
pub fn single_trajectory_first_nodes<M: Model + ?Sized>(
    model: &M,
    i: usize,
    anchor: &[f64],
    nodes: &[f64],
    v_hat: f64,
) -> Result<f64, EstimatorError> {
    if !(v_hat.is_finite() && v_hat > 0.0) {
        return Err(EstimatorError::NonPositiveVariance(v_hat));
    }
    if i >= anchor.len() {
        return Err(EstimatorError::InputOutOfRange(i));
    }
    if nodes.len() < 2 {
        return Err(EstimatorError::TooFewSamples { min: 2, got: nodes.len() });
    }
    let mut x = anchor.to_vec();
    let ys: Vec<f64> = nodes
        .iter()
        .map(|&node| {
            x[i] = node;
            model.eval(&x)
        })
        .collect();
    Ok(population_variance(&ys) / v_hat)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
}

const MAX_REDRAWS: usize = 100;

/// Percentile bootstrap intervals for `method` (Jansen total or first).
///
/// Rows are resampled with replacement `r` times. A resample whose output
/// variance collapses is redrawn, at most 100 times per resample.
pub fn bootstrap_percentile(
    outputs: &PickFreezeOutputs,
    method: Method,
    r: usize,
    level: f64,
    seed: u64,
) -> Result<Vec<ConfidenceInterval>, EstimatorError> {
    if r < 100 {
        return Err(EstimatorError::TooFewResamples(r));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(EstimatorError::InvalidLevel(level));
    }
    let n = check_lengths(&outputs.y_a, &outputs.y_ab)?;
    if method == Method::JansenFirst && outputs.y_b.is_none() {
        return Err(EstimatorError::MissingB);
    }
    let k = outputs.k();
    let mut rng = stream(seed);
    let mut draws: Vec<Vec<f64>> = vec![Vec::with_capacity(r); k];
    let mut idx = vec![0usize; n];
    let pick = |src: &[f64], idx: &[usize]| idx.iter().map(|&j| src[j]).collect::<Vec<f64>>();
    for _ in 0..r {
        let mut redraws = 0;
        let est = loop {
            for slot in idx.iter_mut() {
                *slot = rng.random_range(0..n);
            }
            let resampled = PickFreezeOutputs {
                y_a: pick(&outputs.y_a, &idx),
                y_b: outputs.y_b.as_ref().map(|b| pick(b, &idx)),
                y_ab: outputs.y_ab.iter().map(|c| pick(c, &idx)).collect(),
            };
            let est = match method {
                Method::JansenFirst => resampled.first()?,
                _ => resampled.total()?,
            };
            if !est.degenerate {
                break est;
            }
            redraws += 1;
            if redraws > MAX_REDRAWS {
                return Err(EstimatorError::DegenerateResamples);
            }
        };
        for (d, v) in draws.iter_mut().zip(est.values) {
            d.push(v);
        }
    }
    let tail = (1.0 - level) / 2.0;
    Ok(draws
        .into_iter()
        .map(|mut d| {
            d.sort_by(f64::total_cmp);
            ConfidenceInterval {
                lo: quantile_sorted(&d, tail),
                hi: quantile_sorted(&d, 1.0 - tail),
            }
        })
        .collect())
}
