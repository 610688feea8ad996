//! Input distributions for the benchmark, applied by inverse-CDF transform.
//!
//! Unit-interval values are clamped to `[0.001, 0.999]` before
//! transformation.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Normal};
use thiserror::Error;

pub const CLAMP_LOW: f64 = 0.001;
pub const CLAMP_HIGH: f64 = 0.999;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("distribution code {0} is outside 1..=8")]
    UnknownPhi(u8),
    #[error("family code {0} is outside 1..=7")]
    UnknownFamily(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Uniform,
    Normal { mean: f64, sd: f64 },
    Beta { alpha: f64, beta: f64 },
    LogitNormal { mu: f64, sigma: f64 },
}

impl Family {
    /// The seven fixed benchmark families, codes `1..=7`.
    pub fn from_code(code: u8) -> Result<Self, DistributionError> {
        Ok(match code {
            1 => Family::Uniform,
            2 => Family::Normal { mean: 0.5, sd: 0.2 },
            3 => Family::Beta { alpha: 8.0, beta: 2.0 },
            4 => Family::Beta { alpha: 2.0, beta: 8.0 },
            5 => Family::Beta { alpha: 2.0, beta: 0.5 },
            6 => Family::Beta { alpha: 0.5, beta: 2.0 },
            7 => Family::LogitNormal { mu: 0.0, sigma: 3.16 },
            other => return Err(DistributionError::UnknownFamily(other)),
        })
    }

    /// Quantile function at `u` in `(0, 1)`; no clamping.
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            Family::Uniform => u,
            Family::Normal { mean, sd } => mean + sd * standard_normal_quantile(u),
            Family::Beta { alpha, beta } => Beta::new(alpha, beta)
                .expect("beta shape parameters are positive")
                .inverse_cdf(u),
            Family::LogitNormal { mu, sigma } => {
                1.0 / (1.0 + (-(mu + sigma * standard_normal_quantile(u))).exp())
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Family::Uniform => x.clamp(0.0, 1.0),
            Family::Normal { mean, sd } => standard_normal().cdf((x - mean) / sd),
            Family::Beta { alpha, beta } => Beta::new(alpha, beta)
                .expect("beta shape parameters are positive")
                .cdf(x),
            Family::LogitNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    standard_normal().cdf(((x / (1.0 - x)).ln() - mu) / sigma)
                }
            }
        }
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

fn standard_normal_quantile(u: f64) -> f64 {
    standard_normal().inverse_cdf(u)
}

pub fn clamp_unit(u: f64) -> f64 {
    u.clamp(CLAMP_LOW, CLAMP_HIGH)
}

/// Clamp `u` into `[0.001, 0.999]`, then apply the family's quantile.
pub fn inv_cdf(u: f64, family: &Family) -> f64 {
    family.quantile(clamp_unit(u))
}

/// Per-input families resolved from a distribution code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    phi: u8,
    per_input: Vec<Family>,
}

/// Codes `1..=7` give every input the same family; code `8` draws one of
/// `1..=7` per input from the seeded stream.
pub fn resolve_phi(phi: u8, k: usize, seed: u64) -> Result<DistributionSpec, DistributionError> {
    let per_input = match phi {
        1..=7 => vec![Family::from_code(phi)?; k],
        8 => {
            let mut rng = crate::rng::stream(seed);
            (0..k)
                .map(|_| Family::from_code(rng.random_range(1..=7u8)))
                .collect::<Result<_, _>>()?
        }
        other => return Err(DistributionError::UnknownPhi(other)),
    };
    Ok(DistributionSpec { phi, per_input })
}

impl DistributionSpec {
    pub fn phi(&self) -> u8 {
        self.phi
    }

    pub fn per_input(&self) -> &[Family] {
        &self.per_input
    }

    pub fn family(&self, input: usize) -> &Family {
        &self.per_input[input]
    }

    pub fn transform(&self, input: usize, u: f64) -> f64 {
        inv_cdf(u, &self.per_input[input])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_families() -> Vec<Family> {
        (1..=7).map(|c| Family::from_code(c).unwrap()).collect()
    }

    #[test]
    fn fixed_codes_resolve_uniformly() {
        let s = resolve_phi(1, 5, 0).unwrap();
        assert!(s.per_input().iter().all(|f| *f == Family::Uniform));
        let s = resolve_phi(2, 3, 0).unwrap();
        assert!(s
            .per_input()
            .iter()
            .all(|f| *f == Family::Normal { mean: 0.5, sd: 0.2 }));
    }

    #[test]
    fn mixed_code_is_seeded() {
        assert_eq!(resolve_phi(8, 2, 11).unwrap(), resolve_phi(8, 2, 11).unwrap());
        let wide = resolve_phi(8, 200, 3).unwrap();
        for code in 1..=7 {
            let f = Family::from_code(code).unwrap();
            assert!(wide.per_input().contains(&f), "family {code} never drawn");
        }
    }

    #[test]
    fn bad_codes_error() {
        assert_eq!(resolve_phi(0, 2, 0), Err(DistributionError::UnknownPhi(0)));
        assert_eq!(resolve_phi(9, 2, 0), Err(DistributionError::UnknownPhi(9)));
    }

    #[test]
    fn symmetric_medians() {
        assert!((inv_cdf(0.5, &Family::Normal { mean: 0.5, sd: 0.2 }) - 0.5).abs() < 1e-15);
        assert!((inv_cdf(0.5, &Family::LogitNormal { mu: 0.0, sigma: 3.16 }) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn round_trip_every_family() {
        for f in all_families() {
            for j in 1..100 {
                let u = j as f64 / 100.0;
                let x = inv_cdf(u, &f);
                assert!((f.cdf(x) - u).abs() < 1e-7, "{f:?} at {u}: {}", f.cdf(x));
            }
        }
    }

    #[test]
    fn clamp_keeps_boundaries_finite() {
        for f in all_families() {
            for u in [0.0, 1e-300, 1.0 - f64::EPSILON, 1.0] {
                let x = inv_cdf(u, &f);
                assert!(x.is_finite(), "{f:?} at {u}");
            }
            assert_eq!(inv_cdf(0.9995, &f), inv_cdf(0.999, &f));
            assert_eq!(inv_cdf(0.0, &f), inv_cdf(0.001, &f));
        }
    }

    #[test]
    fn quantiles_are_monotone() {
        for f in all_families() {
            let mut prev = f64::NEG_INFINITY;
            for j in 0..=1000 {
                let x = inv_cdf(j as f64 / 1000.0, &f);
                assert!(x >= prev, "{f:?}");
                prev = x;
            }
        }
    }
}
