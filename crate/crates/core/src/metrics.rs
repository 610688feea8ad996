//! Estimator performance measures: MAE, probability of failure and the
//! correlation measures `δ`.
//!
//! Rank 1 is the largest index value.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::pearson;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("no replicates supplied")]
    NoReplicates,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("ranks are not a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("performance measure code {0} is outside 1..=3")]
    UnknownDelta(u8),
    #[error("correlation needs at least 3 inputs, got {0}")]
    TooFewInputs(usize),
}

/// Correlation measure between true and estimated indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta {
    /// Pearson on raw values.
    Raw,
    /// Pearson on ranks.
    Rank,
    /// Pearson on Savage scores.
    Savage,
}

impl Delta {
    pub fn from_code(code: u8) -> Result<Self, MetricsError> {
        match code {
            1 => Ok(Delta::Raw),
            2 => Ok(Delta::Rank),
            3 => Ok(Delta::Savage),
            other => Err(MetricsError::UnknownDelta(other)),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Delta::Raw => 1,
            Delta::Rank => 2,
            Delta::Savage => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceSpec {
    pub delta: Delta,
    pub replicates: usize,
}

fn check_len(expected: usize, got: usize) -> Result<(), MetricsError> {
    if expected == got {
        Ok(())
    } else {
        Err(MetricsError::LengthMismatch { expected, got })
    }
}

/// `(1/p) Σ_v (1/k) Σ_i |T_i - T̂_{v,i}|`.
pub fn mae(truth: &[f64], replicates: &[Vec<f64>]) -> Result<f64, MetricsError> {
    if replicates.is_empty() {
        return Err(MetricsError::NoReplicates);
    }
    let k = truth.len() as f64;
    let mut total = 0.0;
    for rep in replicates {
        check_len(truth.len(), rep.len())?;
        total += truth.iter().zip(rep).map(|(t, e)| (t - e).abs()).sum::<f64>() / k;
    }
    Ok(total / replicates.len() as f64)
}

/// True when some pair with `truth[a] > truth[b]` is estimated with
/// `est[b] - est[a] > tie_tolerance`. Estimated ties never count as failures.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn ranking_fails(truth: &[f64], est: &[f64], tie_tolerance: f64) -> bool {
    for a in 0..truth.len() {
        for b in 0..truth.len() {
            if truth[a] > truth[b] && !(est[b] - est[a] <= tie_tolerance) {
                return true;
            }
        }
    }
    false
}

/// Fraction of replicates whose ranking inverts a strictly ordered true
/// pair by more than `tie_tolerance`.
pub fn prob_failure(
    truth: &[f64],
    replicates: &[Vec<f64>],
    tie_tolerance: f64,
) -> Result<f64, MetricsError> {
    if replicates.is_empty() {
        return Err(MetricsError::NoReplicates);
    }
    let mut failures = 0usize;
    for rep in replicates {
        check_len(truth.len(), rep.len())?;
        if ranking_fails(truth, rep, tie_tolerance) {
            failures += 1;
        }
    }
    Ok(failures as f64 / replicates.len() as f64)
}

fn harmonic_tails(k: usize) -> Vec<f64> {
    // tails[j] = Σ_{m=j+1}^{k} 1/m
    let mut tails = vec![0.0; k + 1];
    for j in (0..k).rev() {
        tails[j] = tails[j + 1] + 1.0 / (j + 1) as f64;
    }
    tails.truncate(k);
    tails
}

/// Savage score `Σ_{m=j}^{k} 1/m` for each item of rank `j` (1-based).
pub fn savage_scores(ranks: &[usize]) -> Result<Vec<f64>, MetricsError> {
    let k = ranks.len();
    let mut seen = vec![false; k];
    for &r in ranks {
        if r == 0 || r > k || seen[r - 1] {
            return Err(MetricsError::InvalidPermutation(k));
        }
        seen[r - 1] = true;
    }
    let tails = harmonic_tails(k);
    Ok(ranks.iter().map(|&r| tails[r - 1]).collect())
}

/// Descending ranks with ties given the average rank of their block.
pub fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            out[idx] = avg;
        }
        start = end;
    }
    out
}

/// Savage scores of the descending ranks of `values`; tied items share the
/// mean score of their block.
pub fn savage_from_values(values: &[f64]) -> Vec<f64> {
    let tails = harmonic_tails(values.len());
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = tails[start..end].iter().sum::<f64>() / (end - start) as f64;
        for &idx in &order[start..end] {
            out[idx] = avg;
        }
        start = end;
    }
    out
}

/// Correlation between `truth` and `est` under measure `delta`. `Ok(None)`
/// when either side is constant after transformation or contains NaN.
pub fn performance_r(delta: Delta, truth: &[f64], est: &[f64]) -> Result<Option<f64>, MetricsError> {
    check_len(truth.len(), est.len())?;
    if truth.len() < 3 {
        return Err(MetricsError::TooFewInputs(truth.len()));
    }
    if truth.iter().chain(est).any(|v| !v.is_finite()) {
        return Ok(None);
    }
    Ok(match delta {
        Delta::Raw => pearson(truth, est),
        Delta::Rank => pearson(&ranks(truth), &ranks(est)),
        Delta::Savage => pearson(&savage_from_values(truth), &savage_from_values(est)),
    })
}
