//! Seeded random metafunction: univariate bank functions combined additively
//! plus pairwise and three-way product interactions.
//!
//! ```text
//! y = Σ α_i e_i + Σ β_uv e_u e_v + Σ γ_uvw e_u e_v e_w,   e_i = f_{id(i)}(x_i)
//! ```

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Model, ModelError};
use crate::rng::{derive_seed, stream};

const STREAM_LABEL: u64 = 0x6d65_7461;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BankFunction {
    Linear,
    Quadratic,
    Cubic,
    Exponential,
    Periodic,
    Discontinuous,
    NonMonotonic,
    Inverse,
    Trigonometric,
    NoEffect,
}

impl BankFunction {
    pub const ALL: [BankFunction; 10] = [
        BankFunction::Linear,
        BankFunction::Quadratic,
        BankFunction::Cubic,
        BankFunction::Exponential,
        BankFunction::Periodic,
        BankFunction::Discontinuous,
        BankFunction::NonMonotonic,
        BankFunction::Inverse,
        BankFunction::Trigonometric,
        BankFunction::NoEffect,
    ];

    pub fn apply(self, x: f64) -> f64 {
        use std::f64::consts::{E, PI};
        match self {
            BankFunction::Linear => x,
            BankFunction::Quadratic => x * x,
            BankFunction::Cubic => x * x * x,
            BankFunction::Exponential => (x.exp() - 1.0) / (E - 1.0),
            BankFunction::Periodic => (2.0 * PI * x).sin(),
            BankFunction::Discontinuous => {
                if x > 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            BankFunction::NonMonotonic => 4.0 * x * (1.0 - x),
            BankFunction::Inverse => 1.0 / (10.0 * (x + 0.1)),
            BankFunction::Trigonometric => (PI * x).cos(),
            BankFunction::NoEffect => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetafunctionSpec {
    k: usize,
    seed: u64,
    k2: f64,
    k3: f64,
    functions: Vec<BankFunction>,
    alpha: Vec<f64>,
    pairs: Vec<([usize; 2], f64)>,
    triples: Vec<([usize; 3], f64)>,
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn all_pairs(k: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::with_capacity(binomial(k, 2));
    for u in 0..k {
        for v in u + 1..k {
            out.push([u, v]);
        }
    }
    out
}

fn all_triples(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(binomial(k, 3));
    for u in 0..k {
        for v in u + 1..k {
            for w in v + 1..k {
                out.push([u, v, w]);
            }
        }
    }
    out
}

/// Candidate pool of `min(k, |all|)` terms drawn without replacement, of
/// which the first `round(fraction * |pool|)` are active.
fn active_terms<T: Copy, R: Rng>(all: &[T], k: usize, fraction: f64, rng: &mut R) -> Vec<T> {
    let pool_size = k.min(all.len());
    let pool = sample(rng, all.len(), pool_size);
    let active = (fraction * pool_size as f64).round() as usize;
    pool.iter().take(active).map(|j| all[j]).collect()
}

/// Build the metafunction for `(k, seed, k2, k3)`.
///
/// `k2` and `k3` are the fractions of the pair and triple pools to activate;
/// any value in `[0, 1]` is accepted, zero disabling that interaction order.
pub fn metafunction_build(
    k: usize,
    seed: u64,
    k2: f64,
    k3: f64,
) -> Result<MetafunctionSpec, ModelError> {
    if k < 3 {
        return Err(ModelError::TooFewInputs(k));
    }
    for frac in [k2, k3] {
        if !(0.0..=1.0).contains(&frac) {
            return Err(ModelError::InvalidFraction(frac));
        }
    }
    let mut rng = stream(derive_seed(seed, STREAM_LABEL));
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let half = Normal::new(0.0, 0.5).expect("normal sd 0.5");

    let functions = (0..k)
        .map(|_| BankFunction::ALL[rng.random_range(0..BankFunction::ALL.len())])
        .collect();
    let alpha = (0..k).map(|_| unit.sample(&mut rng)).collect();
    let pairs = active_terms(&all_pairs(k), k, k2, &mut rng)
        .into_iter()
        .map(|p| (p, half.sample(&mut rng)))
        .collect();
    let triples = active_terms(&all_triples(k), k, k3, &mut rng)
        .into_iter()
        .map(|t| (t, half.sample(&mut rng)))
        .collect();

    Ok(MetafunctionSpec {
        k,
        seed,
        k2,
        k3,
        functions,
        alpha,
        pairs,
        triples,
    })
}

impl MetafunctionSpec {
    /// Assemble a spec directly, e.g. for hand-built test models.
    pub fn from_parts(
        functions: Vec<BankFunction>,
        alpha: Vec<f64>,
        pairs: Vec<([usize; 2], f64)>,
        triples: Vec<([usize; 3], f64)>,
    ) -> Result<Self, ModelError> {
        let k = functions.len();
        if alpha.len() != k {
            return Err(ModelError::DimensionMismatch {
                expected: k,
                got: alpha.len(),
            });
        }
        let out_of_range = pairs.iter().flat_map(|(p, _)| p.iter()).chain(triples.iter().flat_map(|(t, _)| t.iter()));
        if let Some(&bad) = out_of_range.clone().find(|&&j| j >= k) {
            return Err(ModelError::DimensionMismatch { expected: k, got: bad + 1 });
        }
        Ok(Self {
            k,
            seed: 0,
            k2: 0.0,
            k3: 0.0,
            functions,
            alpha,
            pairs,
            triples,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn functions(&self) -> &[BankFunction] {
        &self.functions
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn pairs(&self) -> &[([usize; 2], f64)] {
        &self.pairs
    }

    pub fn triples(&self) -> &[([usize; 3], f64)] {
        &self.triples
    }

    /// Univariate effect `f_{id(i)}(x)`.
    pub fn effect(&self, i: usize, x: f64) -> f64 {
        self.functions[i].apply(x)
    }

    /// Output given precomputed univariate effects.
    pub fn eval_effects(&self, e: &[f64]) -> f64 {
        let mut y: f64 = self.alpha.iter().zip(e).map(|(a, ei)| a * ei).sum();
        for &([u, v], beta) in &self.pairs {
            y += beta * e[u] * e[v];
        }
        for &([u, v, w], gamma) in &self.triples {
            y += gamma * e[u] * e[v] * e[w];
        }
        y
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, ModelError> {
        if x.len() != self.k {
            return Err(ModelError::DimensionMismatch {
                expected: self.k,
                got: x.len(),
            });
        }
        let e: Vec<f64> = x.iter().enumerate().map(|(i, &xi)| self.effect(i, xi)).collect();
        Ok(self.eval_effects(&e))
    }
}

impl Model for MetafunctionSpec {
    fn dim(&self) -> usize {
        self.k
    }

    fn eval(&self, x: &[f64]) -> f64 {
        MetafunctionSpec::eval(self, x).expect("point dimension matches the metafunction")
    }

    fn label(&self) -> String {
        format!("metafunction(k={}, seed={}, k2={}, k3={})", self.k, self.seed, self.k2, self.k3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_rule_sets_active_counts() {
        let m = metafunction_build(4, 1, 1.0, 0.5).unwrap();
        assert_eq!(m.pairs().len(), 4);
        assert_eq!(m.triples().len(), 2);
        let m = metafunction_build(10, 9, 0.5, 0.3).unwrap();
        assert_eq!(m.pairs().len(), 5);
        assert_eq!(m.triples().len(), 3);
        let m = metafunction_build(3, 9, 1.0, 1.0).unwrap();
        assert_eq!(m.pairs().len(), 3);
        assert_eq!(m.triples().len(), 1);
    }

    #[test]
    fn terms_are_distinct_and_sorted() {
        let m = metafunction_build(50, 77, 1.0, 1.0).unwrap();
        let mut seen = std::collections::HashSet::new();
        for ([u, v], _) in m.pairs() {
            assert!(u < v && *v < 50);
            assert!(seen.insert((*u, *v)));
        }
        for ([u, v, w], _) in m.triples() {
            assert!(u < v && v < w && *w < 50);
        }
    }

    #[test]
    fn rebuild_is_identical() {
        assert_eq!(
            metafunction_build(12, 5, 0.75, 0.4).unwrap(),
            metafunction_build(12, 5, 0.75, 0.4).unwrap()
        );
        assert_ne!(
            metafunction_build(12, 5, 0.75, 0.4).unwrap(),
            metafunction_build(12, 6, 0.75, 0.4).unwrap()
        );
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(metafunction_build(2, 1, 0.5, 0.5), Err(ModelError::TooFewInputs(2)));
        assert_eq!(metafunction_build(5, 1, 1.5, 0.5), Err(ModelError::InvalidFraction(1.5)));
        let m = metafunction_build(5, 1, 0.5, 0.5).unwrap();
        assert!(matches!(m.eval(&[0.1; 4]), Err(ModelError::DimensionMismatch { .. })));
    }

    #[test]
    fn no_effect_bank_gives_zero() {
        let m = MetafunctionSpec::from_parts(
            vec![BankFunction::NoEffect; 3],
            vec![1.0, -2.0, 0.3],
            vec![([0, 1], 0.4)],
            vec![([0, 1, 2], 0.1)],
        )
        .unwrap();
        assert_eq!(m.eval(&[0.2, 0.7, 0.9]).unwrap(), 0.0);
    }

    #[test]
    fn single_linear_input() {
        let m = MetafunctionSpec::from_parts(
            vec![BankFunction::Linear, BankFunction::NoEffect, BankFunction::NoEffect],
            vec![1.0, 0.0, 0.0],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(m.eval(&[0.37, 0.1, 0.9]).unwrap(), 0.37);
    }

    #[test]
    fn zero_fractions_give_additive_model() {
        let m = metafunction_build(6, 3, 0.0, 0.0).unwrap();
        assert!(m.pairs().is_empty() && m.triples().is_empty());
        let x = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
        let additive: f64 = (0..6).map(|i| m.alpha()[i] * m.effect(i, x[i])).sum();
        assert_eq!(m.eval(&x).unwrap(), additive);
    }

    #[test]
    fn bank_shapes() {
        assert_eq!(BankFunction::Exponential.apply(0.0), 0.0);
        assert!((BankFunction::Exponential.apply(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(BankFunction::NonMonotonic.apply(0.5), 1.0);
        assert_eq!(BankFunction::Discontinuous.apply(0.5), 0.0);
        assert_eq!(BankFunction::Discontinuous.apply(0.51), 1.0);
        assert!((BankFunction::Inverse.apply(0.0) - 1.0).abs() < 1e-15);
        assert_eq!(binomial(50, 3), 19_600);
    }
}
