use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use varsobol::bench::HSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Estimate,
    Benchmark,
    Meta,
    Replicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    Sixdim,
    Liu,
    Metafunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Jansen,
    VarsTo,
    SingleTrajectory,
    Ivars,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Fig4a,
    Fig4b,
    Fig5,
    Fig6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum HSetChoice {
    Table1,
    Supplementary,
}

impl From<HSetChoice> for HSet {
    fn from(h: HSetChoice) -> Self {
        match h {
            HSetChoice::Table1 => HSet::Table1,
            HSetChoice::Supplementary => HSet::Supplementary,
        }
    }
}

/// Every setting of a run. Unset keys in a config file take these
/// defaults; command-line flags override both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub seed: u64,
    pub out: PathBuf,
    pub workers: usize,

    pub model: Option<ModelChoice>,
    pub method: Option<MethodChoice>,
    /// Base sample size for Jansen and for sampled variances.
    pub n: usize,
    pub n_star: usize,
    pub h: f64,
    /// Points per single trajectory.
    pub grid: usize,
    /// IVARS horizon.
    pub horizon: f64,
    /// Sampler: 1 pseudo-random, 2 Sobol'.
    pub tau: u8,
    /// Metafunction settings.
    pub k: usize,
    pub eps: u64,
    pub k2: f64,
    pub k3: f64,
    pub phi: u8,

    pub rows: usize,
    pub base: usize,
    pub truth_n: usize,
    pub h_set: HSetChoice,
    pub bootstrap: usize,
    pub level: f64,

    pub figure: Option<Figure>,
    /// Replicates per budget; 500 for fig4a and 50 for fig4b when unset.
    pub replicates: Option<usize>,
    /// Base sizes `N` of the replicate budget grid.
    pub budgets: Vec<usize>,
    pub tie_tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            seed: 1,
            out: PathBuf::from("out"),
            workers: 1,
            model: None,
            method: None,
            n: 4096,
            n_star: 50,
            h: 0.1,
            grid: 10_000,
            horizon: 0.5,
            tau: 2,
            k: 10,
            eps: 1,
            k2: 0.5,
            k3: 0.3,
            phi: 1,
            rows: 128,
            base: 1024,
            truth_n: 4096,
            h_set: HSetChoice::Table1,
            bootstrap: 500,
            level: 0.95,
            figure: None,
            replicates: None,
            budgets: vec![16, 32, 64, 128, 256],
            tie_tolerance: 0.0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Problems that make the configuration unusable, phrased for the user.
    pub fn usage_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let Some(command) = self.command else {
            out.push("no command given (estimate, benchmark, meta or replicate)".into());
            return out;
        };
        if self.workers == 0 {
            out.push("--workers must be at least 1".into());
        }
        match command {
            Command::Estimate => {
                if self.model.is_none() {
                    out.push("estimate needs --model".into());
                }
                if self.method.is_none() {
                    out.push("estimate needs --method".into());
                }
                if !(1..=2).contains(&self.tau) {
                    out.push(format!("--tau {} is not 1 or 2", self.tau));
                }
            }
            Command::Benchmark if self.rows == 0 => out.push("--rows must be at least 1".into()),
            Command::Meta if !self.base.is_power_of_two() => {
                out.push(format!("--base {} is not a power of two", self.base))
            }
            Command::Replicate => match self.figure {
                None => out.push("replicate needs --figure".into()),
                Some(Figure::Fig5 | Figure::Fig6) if self.rows == 0 => {
                    out.push("--rows must be at least 1".into())
                }
                Some(Figure::Fig4a | Figure::Fig4b) if self.budgets.is_empty() => {
                    out.push("--budgets must list at least one base size".into())
                }
                _ => {}
            },
            _ => {}
        }
        out
    }
}
