//! One-dimensional functions used to contrast variogram and variance views
//! of sensitivity.
//!
//! Panel A functions live on `[-1, 1]`; panels B and C on `[0, 1]`.

use std::f64::consts::PI;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure1 {
    /// Unimodal shapes: `x^2`, `|x|`, and a bimodal pair of parabolas.
    A,
    /// Equal-variance pair: `1.11 x^2` and `2 - 0.2 cos(7 pi x)`.
    B,
    /// Identity and two sawtooth-like periodic functions.
    C,
}

impl Figure1 {
    fn name(self) -> &'static str {
        match self {
            Figure1::A => "1a",
            Figure1::B => "1b",
            Figure1::C => "1c",
        }
    }
}

/// `(-1)^floor(n x) [p - (x mod p)] + p`
fn alternating_sawtooth(x: f64, n: f64, p: f64) -> f64 {
    let sign = if (n * x).floor().rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    sign * (p - x.rem_euclid(p)) + p
}

/// Evaluate function `fn_id` (1-based) of the given panel.
pub fn fig1_eval(figure: Figure1, fn_id: usize, x: f64) -> Result<f64, ModelError> {
    let unknown = || ModelError::UnknownFunction {
        figure: figure.name(),
        fn_id,
    };
    Ok(match (figure, fn_id) {
        (Figure1::A, 1) => x * x,
        (Figure1::A, 2) => x.abs(),
        (Figure1::A, 3) => {
            if x < 0.0 {
                -(x + 1.0).powi(2)
            } else {
                -(x - 1.0).powi(2)
            }
        }
        (Figure1::B, 1) => 1.11 * x * x,
        (Figure1::B, 2) => 2.0 - 0.2 * (7.0 * PI * x).cos(),
        (Figure1::C, 1) => x,
        (Figure1::C, 2) => alternating_sawtooth(x, 4.0, 0.125),
        (Figure1::C, 3) => alternating_sawtooth(x, 32.0, 0.0325),
        _ => return Err(unknown()),
    })
}
