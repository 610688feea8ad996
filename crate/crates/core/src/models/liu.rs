//! Liu's skewed ratio `y = x_1 / x_2` with `x_1 ~ chi2(10)` and
//! `x_2 ~ chi2(13.978)`.

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::Model;
use crate::rng::{derive_seed, stream};

pub const LIU_DOF: [f64; 2] = [10.0, 13.978];

/// Denominators below this are redrawn.
const MIN_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LiuModel {
    seed: u64,
    laws: [ChiSquared; 2],
}

pub fn liu_build(seed: u64) -> LiuModel {
    LiuModel {
        seed,
        laws: LIU_DOF.map(|dof| ChiSquared::new(dof).expect("positive degrees of freedom")),
    }
}

impl LiuModel {
    /// Chi-square quantile of `u` for input `i`. A denominator quantile below
    /// `1e-12` is replaced by a redraw seeded from `(seed, u)`.
    pub fn transform(&self, i: usize, u: f64) -> f64 {
        let x = self.laws[i].inverse_cdf(u);
        if i == 0 || x >= MIN_DENOMINATOR {
            return x;
        }
        let mut rng = stream(derive_seed(self.seed, u.to_bits()));
        loop {
            let x = self.laws[1].inverse_cdf(rng.random::<f64>());
            if x >= MIN_DENOMINATOR {
                return x;
            }
        }
    }

    pub fn ratio(x: &[f64]) -> f64 {
        x[0] / x[1]
    }
}

impl Model for LiuModel {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, u: &[f64]) -> f64 {
        Self::ratio(&[self.transform(0, u[0]), self.transform(1, u[1])])
    }

    fn label(&self) -> String {
        format!("liu(seed={})", self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_denominator_is_redrawn_deterministically() {
        let m = liu_build(3);
        let x = m.transform(1, 0.0);
        assert!(x >= MIN_DENOMINATOR);
        assert_eq!(x, liu_build(3).transform(1, 0.0));
        assert!(m.eval(&[0.5, 0.0]).is_finite());
    }

    #[test]
    fn quantiles_invert_the_cdf() {
        let m = liu_build(0);
        for (i, law) in m.laws.iter().enumerate() {
            for u in [0.05, 0.5, 0.95] {
                assert!((law.cdf(m.transform(i, u)) - u).abs() < 1e-9);
            }
        }
    }
}
