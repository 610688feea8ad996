//! `varsobol`: sensitivity estimates, benchmark sweeps and replication
//! tables as CSV.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use config::{Command, Figure, HSetChoice, MethodChoice, ModelChoice, RunConfig};

#[derive(Parser)]
#[command(name = "varsobol", version, about = "VARS and Sobol' sensitivity estimators")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for benchmark sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// TOML file with any of the settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate indices of a built-in model.
    Estimate(EstimateArgs),
    /// Run the randomized VARS-TO vs Jansen comparison.
    Benchmark(BenchmarkArgs),
    /// Sobol' indices of the benchmark parameters on VARS-TO performance.
    Meta(MetaArgs),
    /// Tables behind the replication figures.
    Replicate(ReplicateArgs),
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    model: Option<ModelChoice>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    /// Base sample size (Jansen; sampled output variance).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_star: Option<usize>,
    /// Lag spacing; 1/h must be an integer.
    #[arg(long)]
    h: Option<f64>,
    /// Points per single trajectory.
    #[arg(long)]
    grid: Option<usize>,
    /// IVARS horizon (0.1, 0.3 or 0.5).
    #[arg(long)]
    horizon: Option<f64>,
    /// 1 pseudo-random, 2 Sobol'.
    #[arg(long)]
    tau: Option<u8>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: Option<u64>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long)]
    k3: Option<f64>,
    /// Input distribution code 1..=8 for the metafunction.
    #[arg(long)]
    phi: Option<u8>,
    /// Bootstrap resamples for Jansen intervals; 0 disables.
    #[arg(long)]
    bootstrap: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Number of benchmark rows.
    #[arg(long)]
    rows: Option<usize>,
    /// Base size of the reference Jansen estimate.
    #[arg(long)]
    truth_n: Option<usize>,
    #[arg(long, value_enum)]
    h_set: Option<HSetChoice>,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct MetaArgs {
    /// Rows per block of the parameter design (power of two).
    #[arg(long)]
    base: Option<usize>,
    #[arg(long)]
    truth_n: Option<usize>,
    #[arg(long, value_enum)]
    h_set: Option<HSetChoice>,
    #[arg(long)]
    bootstrap: Option<usize>,
    #[arg(long)]
    level: Option<f64>,
}

#[derive(Args)]
struct ReplicateArgs {
    #[arg(long, value_enum)]
    figure: Option<Figure>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Comma-separated base sizes N.
    #[arg(long, value_delimiter = ',')]
    budgets: Option<Vec<usize>>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    tie_tolerance: Option<f64>,
    #[command(flatten)]
    sweep: SweepArgs,
}

macro_rules! overlay {
    ($cfg:expr, $args:expr, $($field:ident),*) => {
        $(if let Some(v) = $args.$field.clone() { $cfg.$field = v.into(); })*
    };
}

fn apply_sweep(cfg: &mut RunConfig, s: &SweepArgs) {
    overlay!(cfg, s, rows, truth_n, h_set);
}

fn resolve(cli: Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    overlay!(cfg, cli, seed, out, workers);
    match &cli.command {
        Some(Cmd::Estimate(a)) => {
            cfg.command = Some(Command::Estimate);
            if let Some(m) = a.model {
                cfg.model = Some(m);
            }
            if let Some(m) = a.method {
                cfg.method = Some(m);
            }
            overlay!(cfg, a, n, n_star, h, grid, horizon, tau, k, eps, k2, k3, phi, bootstrap);
        }
        Some(Cmd::Benchmark(a)) => {
            cfg.command = Some(Command::Benchmark);
            apply_sweep(&mut cfg, &a.sweep);
        }
        Some(Cmd::Meta(a)) => {
            cfg.command = Some(Command::Meta);
            overlay!(cfg, a, base, truth_n, h_set, bootstrap, level);
        }
        Some(Cmd::Replicate(a)) => {
            cfg.command = Some(Command::Replicate);
            if let Some(f) = a.figure {
                cfg.figure = Some(f);
            }
            if let Some(r) = a.replicates {
                cfg.replicates = Some(r);
            }
            overlay!(cfg, a, budgets, h, tie_tolerance);
            apply_sweep(&mut cfg, &a.sweep);
        }
        None => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(cli) {
        Ok(cfg) => cfg,
        Err(e) => Cli::command().error(ErrorKind::InvalidValue, format!("{e:#}")).exit(),
    };
    let problems = cfg.usage_problems();
    if !problems.is_empty() {
        Cli::command()
            .error(ErrorKind::MissingRequiredArgument, problems.join("; "))
            .exit();
    }
    let run = commands::prepare_out(&cfg).and_then(|_| match cfg.command.expect("validated") {
        Command::Estimate => commands::estimate(&cfg),
        Command::Benchmark => commands::benchmark(&cfg),
        Command::Meta => commands::meta(&cfg),
        Command::Replicate => commands::replicate(&cfg),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
