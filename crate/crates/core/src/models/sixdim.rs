//! Six-dimensional additive response surface `y = g_1(x_1) + ... + g_6(x_6)`
//! on the unit hypercube, with closed-form component variances.
//!
//! Every component is an instance of the template
//! `a sin(b (x + e)) + c sin(d x) + f`, so one set of antiderivatives covers
//! all six.

use std::f64::consts::PI;

use super::Model;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineTemplate {
    pub a: f64,
    pub b: f64,
    pub e: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
}

pub const SIXDIM_TEMPLATES: [SineTemplate; 6] = [
    SineTemplate { a: -1.0, b: PI, e: 0.0, c: -0.3, d: 3.33 * PI, f: 0.0 },
    SineTemplate { a: -0.76, b: PI, e: -0.2, c: 0.0, d: 1.0, f: -0.315 },
    SineTemplate { a: -0.12, b: 1.05 * PI, e: -0.2, c: -0.02, d: 95.24 * PI, f: -0.96 },
    SineTemplate { a: -0.12, b: 1.05 * PI, e: -0.2, c: 0.0, d: 1.0, f: -0.96 },
    SineTemplate { a: -0.05, b: PI, e: -0.2, c: 0.0, d: 1.0, f: -1.02 },
    SineTemplate { a: 0.0, b: 1.0, e: 0.0, c: 0.0, d: 1.0, f: -1.08 },
];

impl SineTemplate {
    pub fn eval(&self, x: f64) -> f64 {
        let mut y = self.f;
        if self.a != 0.0 {
            y += self.a * (self.b * (x + self.e)).sin();
        }
        if self.c != 0.0 {
            y += self.c * (self.d * x).sin();
        }
        y
    }

    /// `∫ g dx`, up to a constant.
    fn first_moment_antiderivative(&self, x: f64) -> f64 {
        let mut v = self.f * x;
        if self.a != 0.0 {
            v -= self.a / self.b * (self.b * (x + self.e)).cos();
        }
        if self.c != 0.0 {
            v -= self.c / self.d * (self.d * x).cos();
        }
        v
    }

    /// `∫ g^2 dx`, up to a constant.
    fn second_moment_antiderivative(&self, x: f64) -> f64 {
        let Self { a, b, e, c, d, f } = *self;
        let mut v = f * f * x;
        if a != 0.0 {
            let t = b * (x + e);
            v += a * a / (2.0 * b) * (t - 0.5 * (2.0 * t).sin());
            v -= 2.0 * a * f / b * t.cos();
        }
        if c != 0.0 {
            let t = d * x;
            v += c * c / (2.0 * d) * (t - 0.5 * (2.0 * t).sin());
            v -= 2.0 * c * f / d * t.cos();
        }
        if a != 0.0 && c != 0.0 {
            v += a * c
                * (((b - d) * x + b * e).sin() / (b - d) - ((b + d) * x + b * e).sin() / (b + d));
        }
        v
    }

    /// Mean over `[0, 1]`.
    pub fn mean(&self) -> f64 {
        self.first_moment_antiderivative(1.0) - self.first_moment_antiderivative(0.0)
    }

    /// Variance over `[0, 1]` under a uniform input.
    pub fn variance(&self) -> f64 {
        // variance of g - f
        let centered = SineTemplate { f: 0.0, ..*self };
        let m = centered.mean();
        let m2 = centered.second_moment_antiderivative(1.0) - centered.second_moment_antiderivative(0.0);
        (m2 - m * m).max(0.0)
    }
}

/// Component `g_{i+1}(x)` for `i` in `0..6`.
pub fn sixdim_component(i: usize, x: f64) -> f64 {
    SIXDIM_TEMPLATES[i].eval(x)
}

pub fn sixdim_eval(x: &[f64]) -> f64 {
    assert_eq!(x.len(), 6, "six-dimensional model needs 6 inputs");
    x.iter().enumerate().map(|(i, &xi)| sixdim_component(i, xi)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SixDimAnalytic {
    /// Component variances `V(g_i)`.
    pub v: [f64; 6],
    /// First-order (= total-order) indices `V_i / sum V`.
    pub s: [f64; 6],
}

pub fn sixdim_analytic() -> SixDimAnalytic {
    let v = SIXDIM_TEMPLATES.map(|t| t.variance());
    let total: f64 = v.iter().sum();
    SixDimAnalytic { v, s: v.map(|vi| vi / total) }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SixDim;

impl Model for SixDim {
    fn dim(&self) -> usize {
        6
    }

    fn eval(&self, x: &[f64]) -> f64 {
        sixdim_eval(x)
    }

    fn label(&self) -> String {
        "sixdim".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_spot_values() {
        assert_eq!(sixdim_component(0, 0.0), 0.0);
        for x in [0.0, 0.3, 0.99] {
            assert_eq!(sixdim_component(5, x), -1.08);
        }
    }

    #[test]
    fn analytic_shares_sum_to_one() {
        let a = sixdim_analytic();
        assert!((a.s.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(a.v[5], 0.0);
        assert_eq!(a.s[5], 0.0);
        assert!((a.v[0] - 0.0972).abs() < 5e-5);
    }

    #[test]
    fn shifted_template_keeps_variance() {
        let t = SIXDIM_TEMPLATES[2];
        let shifted = SineTemplate { f: 40.0, ..t };
        assert!((t.variance() - shifted.variance()).abs() < 1e-15);
        assert!((shifted.mean() - t.mean() - (40.0 - t.f)).abs() < 1e-12);
    }

    #[test]
    fn midpoint_rule_agrees_with_closed_form() {
        for t in SIXDIM_TEMPLATES {
            let n = 200_000;
            let ys: Vec<f64> = (0..n).map(|j| t.eval((j as f64 + 0.5) / n as f64)).collect();
            let v = crate::stats::population_variance(&ys);
            assert!((v - t.variance()).abs() < 1e-8, "{t:?}: {v} vs {}", t.variance());
        }
    }
}
