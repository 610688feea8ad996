//! Directional variograms, covariograms, IVARS and VARS-TO over STAR-VARS
//! outputs.
//!
//! For a cross-section `y_0, ..., y_{n-1}` on a grid of spacing `h` and a
//! lag of `m` steps, the pairs are `(y_j, y_{j+m})`:
//!
//! ```text
//! γ(mh) = (1/2P) Σ (y_{j+m} - y_j)^2
//! C(mh) = (1/P) Σ (y_j - m_head)(y_{j+m} - m_tail)
//! ```
//!
//! so that `γ + C = (s²_head + s²_tail)/2 + (m_head - m_tail)²/2` holds
//! exactly, with population moments of the heads and tails.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampling::StarDesign;
use crate::sobol_estimators::{Method, SensitivityEstimate};
use crate::stats::{mean, population_variance};

/// Largest lag considered, as a fraction of the input range.
pub const MAX_LAG: f64 = 0.5;

const LAG_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VarsError {
    #[error("design has no stars")]
    EmptyDesign,
    #[error("expected {expected} outputs for the design, got {got}")]
    OutputLength { expected: usize, got: usize },
    #[error("input {0} is out of range")]
    InputOutOfRange(usize),
    #[error("IVARS horizon {horizon} is not a multiple of h = {h} within the computed lags (up to {reach})")]
    Coverage { horizon: f64, h: f64, reach: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagStats {
    /// Lag in grid steps.
    pub steps: usize,
    pub lag: f64,
    pub gamma: f64,
    pub cov: f64,
    pub pairs: usize,
    pub mean_head: f64,
    pub mean_tail: f64,
    pub var_head: f64,
    pub var_tail: f64,
}

/// Per-lag statistics of one ordered cross-section, for lags `m h` up to
/// `min(max_lag, 0.5)`. Lags that leave no pairs are omitted.
pub fn cross_section_stats(y: &[f64], h: f64, max_lag: f64) -> Vec<LagStats> {
    let limit = max_lag.min(MAX_LAG) + LAG_TOL;
    let mut out = Vec::new();
    for m in 1..y.len() {
        let lag = m as f64 * h;
        if lag > limit {
            break;
        }
        let heads = &y[..y.len() - m];
        let tails = &y[m..];
        let p = heads.len() as f64;
        let (mh, mt) = (mean(heads), mean(tails));
        let mut sq = 0.0;
        let mut cross = 0.0;
        for (a, b) in heads.iter().zip(tails) {
            sq += (b - a) * (b - a);
            cross += (a - mh) * (b - mt);
        }
        out.push(LagStats {
            steps: m,
            lag,
            gamma: sq / (2.0 * p),
            cov: cross / p,
            pairs: heads.len(),
            mean_head: mh,
            mean_tail: mt,
            var_head: population_variance(heads),
            var_tail: population_variance(tails),
        });
    }
    out
}

/// Pooled directional variogram and covariogram of one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariogramCurve {
    pub input: usize,
    pub h: f64,
    pub lags: Vec<f64>,
    pub gamma: Vec<f64>,
    pub cov: Vec<f64>,
    pub pairs: Vec<usize>,
    pub mean_head: Vec<f64>,
    pub mean_tail: Vec<f64>,
}

fn check_outputs(design: &StarDesign, outputs: &[f64]) -> Result<(), VarsError> {
    if design.n_star() == 0 {
        return Err(VarsError::EmptyDesign);
    }
    if outputs.len() != design.len() {
        return Err(VarsError::OutputLength {
            expected: design.len(),
            got: outputs.len(),
        });
    }
    Ok(())
}

/// Average the section statistics of input `i` over all stars, weighting
/// each section by its pair count.
pub fn pooled_variogram(
    design: &StarDesign,
    outputs: &[f64],
    i: usize,
) -> Result<VariogramCurve, VarsError> {
    check_outputs(design, outputs)?;
    if i >= design.k() {
        return Err(VarsError::InputOutOfRange(i));
    }
    let h = design.h();
    let mut curve = VariogramCurve {
        input: i,
        h,
        lags: Vec::new(),
        gamma: Vec::new(),
        cov: Vec::new(),
        pairs: Vec::new(),
        mean_head: Vec::new(),
        mean_tail: Vec::new(),
    };
    for star in 0..design.n_star() {
        let y = design.section_outputs(outputs, star, i);
        for (m, s) in cross_section_stats(&y, h, MAX_LAG).into_iter().enumerate() {
            if curve.lags.len() <= m {
                curve.lags.push(s.lag);
                curve.gamma.push(0.0);
                curve.cov.push(0.0);
                curve.pairs.push(0);
                curve.mean_head.push(0.0);
                curve.mean_tail.push(0.0);
            }
            let w = s.pairs as f64;
            curve.gamma[m] += w * s.gamma;
            curve.cov[m] += w * s.cov;
            curve.mean_head[m] += w * s.mean_head;
            curve.mean_tail[m] += w * s.mean_tail;
            curve.pairs[m] += s.pairs;
        }
    }
    for m in 0..curve.lags.len() {
        let w = curve.pairs[m] as f64;
        curve.gamma[m] /= w;
        curve.cov[m] /= w;
        curve.mean_head[m] /= w;
        curve.mean_tail[m] /= w;
    }
    Ok(curve)
}

/// Integrated variogram `Γ(H) = ∫_0^H γ`, trapezoidal with `γ(0) = 0`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn ivars(curve: &VariogramCurve, horizon: f64) -> Result<f64, VarsError> {
    let coverage = || VarsError::Coverage {
        horizon,
        h: curve.h,
        reach: curve.lags.last().copied().unwrap_or(0.0),
    };
    let steps = horizon / curve.h;
    if !(horizon > 0.0) || (steps - steps.round()).abs() > 1e-6 {
        return Err(coverage());
    }
    let steps = steps.round() as usize;
    if steps == 0 || steps > curve.lags.len() {
        return Err(coverage());
    }
    let mut area = 0.0;
    let mut prev = 0.0;
    for &g in &curve.gamma[..steps] {
        area += 0.5 * curve.h * (prev + g);
        prev = g;
    }
    Ok(area)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LagAggregation {
    /// Mean of the per-lag ratios over every lag up to 0.5.
    #[default]
    MeanOverLags,
    /// Ratio at the smallest lag `h` only.
    SmallestLag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarsToResult {
    pub estimate: SensitivityEstimate,
    /// `per_lag[i][m]` is `(γ_i + C_i) / V` at `lags[m]`.
    pub per_lag: Vec<Vec<f64>>,
    pub lags: Vec<f64>,
    pub curves: Vec<VariogramCurve>,
}

/// VARS-TO: `T_i = (E[γ_i(h)] + E[C_i(h)]) / V(y)`, with `V(y)` the
/// population variance of every design output.
pub fn vars_to(
    design: &StarDesign,
    outputs: &[f64],
    aggregation: LagAggregation,
) -> Result<VarsToResult, VarsError> {
    check_outputs(design, outputs)?;
    let variance = population_variance(outputs);
    let curves = (0..design.k())
        .map(|i| pooled_variogram(design, outputs, i))
        .collect::<Result<Vec<_>, _>>()?;
    let lags = curves.first().map(|c| c.lags.clone()).unwrap_or_default();
    let per_lag: Vec<Vec<f64>> = curves
        .iter()
        .map(|c| c.gamma.iter().zip(&c.cov).map(|(g, cv)| (g + cv) / variance).collect())
        .collect();
    let numerators = curves
        .iter()
        .map(|c| {
            let sums: Vec<f64> = c.gamma.iter().zip(&c.cov).map(|(g, cv)| g + cv).collect();
            match aggregation {
                LagAggregation::MeanOverLags => mean(&sums),
                LagAggregation::SmallestLag => sums[0],
            }
        })
        .collect();
    let estimate = SensitivityEstimate::from_numerators(
        Method::VarsTo,
        numerators,
        variance,
        mean(outputs),
        design.len(),
    );
    let per_lag = if estimate.degenerate {
        per_lag.into_iter().map(|v| vec![f64::NAN; v.len()]).collect()
    } else {
        per_lag
    };
    Ok(VarsToResult {
        estimate,
        per_lag,
        lags,
        curves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{build_stars, SampleMatrix};

    #[test]
    fn constant_section_is_flat() {
        for s in cross_section_stats(&[2.5; 10], 0.1, 0.5) {
            assert_eq!(s.gamma, 0.0);
            assert_eq!(s.cov, 0.0);
        }
    }

    #[test]
    fn linear_section_has_quadratic_gamma() {
        let h = 0.1;
        let y: Vec<f64> = (0..10).map(|j| 0.05 + j as f64 * h).collect();
        let stats = cross_section_stats(&y, h, 0.5);
        assert_eq!(stats.len(), 5);
        for s in &stats {
            assert!((s.gamma - s.lag * s.lag / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_point_section() {
        let stats = cross_section_stats(&[0.0, 1.0], 0.5, 0.5);
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].gamma, 0.5);
        assert_eq!(stats[0].pairs, 1);
    }

    #[test]
    fn lags_beyond_section_are_omitted() {
        assert!(cross_section_stats(&[1.0], 0.5, 0.5).is_empty());
        assert_eq!(cross_section_stats(&[1.0; 5], 0.2, 0.5).len(), 2);
    }

    #[test]
    fn ivars_one_panel_and_coverage() {
        let curve = VariogramCurve {
            input: 0,
            h: 0.1,
            lags: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            gamma: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            cov: vec![0.0; 5],
            pairs: vec![9, 8, 7, 6, 5],
            mean_head: vec![0.0; 5],
            mean_tail: vec![0.0; 5],
        };
        assert!((ivars(&curve, 0.1).unwrap() - 0.05).abs() < 1e-15);
        assert!((ivars(&curve, 0.3).unwrap() - 0.1 * (1.0 + 2.0 + 1.5)).abs() < 1e-14);
        let coarse = VariogramCurve {
            h: 0.2,
            lags: vec![0.2, 0.4],
            gamma: vec![1.0, 1.0],
            cov: vec![0.0; 2],
            pairs: vec![4, 3],
            mean_head: vec![0.0; 2],
            mean_tail: vec![0.0; 2],
            ..curve
        };
        assert!(matches!(ivars(&coarse, 0.1), Err(VarsError::Coverage { .. })));
        assert!(matches!(ivars(&coarse, 0.5), Err(VarsError::Coverage { .. })));
    }

    #[test]
    fn ignored_input_has_zero_vars_to() {
        let centers = SampleMatrix::new(2, 2, vec![0.13, 0.42, 0.77, 0.05]).unwrap();
        let design = build_stars(&centers, 0.1).unwrap();
        let outputs = design.evaluate(|_, u| u, |x: &[f64]| x[0] * x[0]);
        let r = vars_to(&design, &outputs, LagAggregation::MeanOverLags).unwrap();
        assert_eq!(r.estimate.values[1], 0.0);
        assert!(r.estimate.values[0] > 0.0);
        assert_eq!(r.estimate.n_evals, 2 * (2 * 9 + 1));
        assert_eq!(r.per_lag[0].len(), 5);
    }

    #[test]
    fn output_length_is_checked() {
        let centers = SampleMatrix::new(1, 2, vec![0.5, 0.5]).unwrap();
        let design = build_stars(&centers, 0.5).unwrap();
        assert!(matches!(
            vars_to(&design, &[1.0], LagAggregation::SmallestLag),
            Err(VarsError::OutputLength { .. })
        ));
        assert!(matches!(
            pooled_variogram(&design, &[1.0, 2.0, 3.0], 2),
            Err(VarsError::InputOutOfRange(2))
        ));
    }
}
