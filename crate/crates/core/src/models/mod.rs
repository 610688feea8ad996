//! Test models.

mod figure1;
mod liu;
mod metafunction;
mod sixdim;

use thiserror::Error;

pub use figure1::{fig1_eval, Figure1};
pub use liu::{liu_build, LiuModel};
pub use metafunction::{metafunction_build, BankFunction, MetafunctionSpec};
pub use sixdim::{
    sixdim_analytic, sixdim_component, sixdim_eval, SixDim, SixDimAnalytic, SineTemplate,
    SIXDIM_TEMPLATES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("figure {figure} has no function {fn_id}")]
    UnknownFunction { figure: &'static str, fn_id: usize },
    #[error("metafunction needs k >= 3, got {0}")]
    TooFewInputs(usize),
    #[error("interaction fraction {0} is outside [0, 1]")]
    InvalidFraction(f64),
    #[error("expected {expected} inputs, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A deterministic map from a point to a scalar output.
pub trait Model: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[f64]) -> f64;

    fn label(&self) -> String;
}

/// Wraps a closure as a [`Model`].
pub struct FnModel<F> {
    dim: usize,
    label: String,
    f: F,
}

impl<F> FnModel<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(dim: usize, label: impl Into<String>, f: F) -> Self {
        Self {
            dim,
            label: label.into(),
            f,
        }
    }
}

impl<F> Model for FnModel<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}
