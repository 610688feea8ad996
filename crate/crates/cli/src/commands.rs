use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use varsobol::bench::{
    fig4a_pf, fig4b_mae, histogram, meta_analysis, run_all, sample_rows, BenchConfig,
    BenchmarkRecord, BudgetPoint, RowModel, RowOutcome,
};
use varsobol::distributions::resolve_phi;
use varsobol::models::{liu_build, metafunction_build, sixdim_analytic, Model, SixDim};
use varsobol::sampling::{build_ab, build_stars, random_points, sobol_points, SampleMatrix};
use varsobol::sobol_estimators::{
    bootstrap_percentile, single_trajectory_first, ConfidenceInterval, Method, SensitivityEstimate,
};
use varsobol::stats::{median, population_variance};
use varsobol::vars_estimators::{ivars, vars_to, LagAggregation};

use crate::config::{Figure, MethodChoice, ModelChoice, RunConfig};

#[derive(Serialize)]
struct EstimateRecord<'a> {
    method: &'a str,
    input: usize,
    value: f64,
    #[serde(rename = "N_t")]
    n_t: usize,
    ci_lo: Option<f64>,
    ci_hi: Option<f64>,
}

#[derive(Serialize)]
struct VariogramRecord {
    input: usize,
    lag: f64,
    gamma: f64,
    cov: f64,
    pairs: usize,
}

fn write_csv<T: Serialize>(path: &Path, records: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn build_model(cfg: &RunConfig) -> Result<Box<dyn Model>> {
    Ok(match cfg.model.expect("checked by usage_problems") {
        ModelChoice::Sixdim => Box::new(SixDim),
        ModelChoice::Liu => Box::new(liu_build(cfg.seed)),
        ModelChoice::Metafunction => {
            let meta = metafunction_build(cfg.k, cfg.eps, cfg.k2, cfg.k3)?;
            let dist = resolve_phi(cfg.phi, cfg.k, cfg.seed)?;
            Box::new(RowModel::from_parts(meta, &dist))
        }
    })
}

fn sample(cfg: &RunConfig, n: usize, d: usize) -> Result<SampleMatrix> {
    Ok(match cfg.tau {
        1 => random_points(n, d, cfg.seed),
        _ => sobol_points(n, d, Some(cfg.seed))?,
    })
}

fn warn_degenerate(est: &SensitivityEstimate) {
    if est.degenerate {
        eprintln!("warning: {} output variance is zero; indices undefined", est.method.name());
    }
}

fn estimate_records(
    est: &SensitivityEstimate,
    cis: Option<&[ConfidenceInterval]>,
) -> Vec<EstimateRecord<'static>> {
    est.values
        .iter()
        .enumerate()
        .map(|(i, &value)| EstimateRecord {
            method: est.method.name(),
            input: i + 1,
            value,
            n_t: est.n_evals,
            ci_lo: cis.map(|c| c[i].lo),
            ci_hi: cis.map(|c| c[i].hi),
        })
        .collect()
}

pub fn estimate(cfg: &RunConfig) -> Result<()> {
    let model = build_model(cfg)?;
    let k = model.dim();
    let eval = |x: &[f64]| model.eval(x);
    let mut records = Vec::new();
    match cfg.method.expect("checked by usage_problems") {
        MethodChoice::Jansen => {
            let outputs = build_ab(&sample(cfg, cfg.n, 2 * k)?)?.evaluate(|_, u| u, eval, true);
            for (est, method) in [
                (outputs.total()?, Method::JansenTotal),
                (outputs.first()?, Method::JansenFirst),
            ] {
                warn_degenerate(&est);
                let cis = if cfg.bootstrap > 0 && !est.degenerate {
                    Some(bootstrap_percentile(&outputs, method, cfg.bootstrap, cfg.level, cfg.seed)?)
                } else {
                    None
                };
                records.extend(estimate_records(&est, cis.as_deref()));
            }
        }
        MethodChoice::VarsTo | MethodChoice::Ivars => {
            let design = build_stars(&sample(cfg, cfg.n_star, k)?, cfg.h)?;
            let y = design.evaluate(|_, u| u, eval);
            let result = vars_to(&design, &y, LagAggregation::MeanOverLags)?;
            if cfg.method == Some(MethodChoice::Ivars) {
                for (i, curve) in result.curves.iter().enumerate() {
                    records.push(EstimateRecord {
                        method: "ivars",
                        input: i + 1,
                        value: ivars(curve, cfg.horizon)?,
                        n_t: design.len(),
                        ci_lo: None,
                        ci_hi: None,
                    });
                }
            } else {
                warn_degenerate(&result.estimate);
                records.extend(estimate_records(&result.estimate, None));
            }
            let curves = result.curves.iter().flat_map(|c| {
                (0..c.lags.len()).map(move |m| VariogramRecord {
                    input: c.input + 1,
                    lag: c.lags[m],
                    gamma: c.gamma[m],
                    cov: c.cov[m],
                    pairs: c.pairs[m],
                })
            });
            write_csv(&cfg.out.join("variogram.csv"), curves)?;
        }
        MethodChoice::SingleTrajectory => {
            let (variance, extra) = if cfg.model == Some(ModelChoice::Sixdim) {
                (sixdim_analytic().v.iter().sum::<f64>(), 0)
            } else {
                let pts = sample(cfg, cfg.n, k)?;
                let y: Vec<f64> = pts.iter_rows().map(eval).collect();
                (population_variance(&y), cfg.n)
            };
            let anchor = sample(cfg, 1, k)?;
            let n_t = k * cfg.grid + extra;
            for i in 0..k {
                let value = single_trajectory_first(model.as_ref(), i, anchor.row(0), cfg.grid, variance)?;
                records.push(EstimateRecord {
                    method: Method::SingleTrajectory.name(),
                    input: i + 1,
                    value,
                    n_t,
                    ci_lo: None,
                    ci_hi: None,
                });
            }
        }
    }
    write_csv(&cfg.out.join("estimate.csv"), records)
}

fn bench_config(cfg: &RunConfig) -> BenchConfig {
    BenchConfig {
        master_seed: cfg.seed,
        truth_n: cfg.truth_n,
        h_set: cfg.h_set.into(),
    }
}

/// Run `rows` benchmark rows, streaming each record to `path`.
fn run_rows(cfg: &RunConfig, path: &Path) -> Result<Vec<RowOutcome>> {
    let rows = sample_rows(cfg.rows, cfg.seed, cfg.h_set.into());
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let total = rows.len();
    let mut done = 0usize;
    let mut io_error = None;
    let outcomes = run_all(&rows, &bench_config(cfg), cfg.workers, |o| {
        done += 1;
        if let Err((row, msg)) = o {
            eprintln!("warning: row {} failed: {msg}", row.id);
        }
        let res = w.serialize(BenchmarkRecord::from_outcome(o)).and_then(|_| Ok(w.flush()?));
        if let Err(e) = res {
            io_error.get_or_insert(e);
        }
        eprint!("\r{done}/{total} rows");
    })?;
    eprintln!();
    if let Some(e) = io_error {
        return Err(e.into());
    }
    let flagged = outcomes
        .iter()
        .filter(|o| o.as_ref().map_or(true, |r| r.flag_vars || r.flag_jansen))
        .count();
    if flagged > 0 {
        eprintln!("warning: {flagged} of {total} rows flagged (undefined r)");
    }
    if outcomes.iter().all(|o| o.is_err()) {
        bail!("every benchmark row failed");
    }
    Ok(outcomes)
}

fn r_values(outcomes: &[RowOutcome]) -> (Vec<f64>, Vec<f64>) {
    outcomes
        .iter()
        .map(|o| {
            let r = o.as_ref().ok();
            (
                r.and_then(|r| r.r_vars).unwrap_or(f64::NAN),
                r.and_then(|r| r.r_jansen).unwrap_or(f64::NAN),
            )
        })
        .unzip()
}

pub fn benchmark(cfg: &RunConfig) -> Result<()> {
    run_rows(cfg, &cfg.out.join("benchmark.csv")).map(|_| ())
}

pub fn meta(cfg: &RunConfig) -> Result<()> {
    let path = cfg.out.join("meta_rows.csv");
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    let total = cfg.base * 11;
    let mut done = 0usize;
    let result = meta_analysis(cfg.base, &bench_config(cfg), cfg.workers, cfg.bootstrap, cfg.level, |o| {
        done += 1;
        // best effort; the index table below is the primary output
        let _ = w.serialize(BenchmarkRecord::from_outcome(o));
        eprint!("\r{done}/{total} rows");
    })?;
    eprintln!();
    w.flush()?;
    if result.undefined_rows > 0 {
        eprintln!("warning: {} rows had undefined r_vars and entered as 0", result.undefined_rows);
    }
    write_csv(&cfg.out.join("meta.csv"), &result.indices)
}

fn write_sweep(path: &Path, points: &[BudgetPoint], measure: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "N",
        "Nt_single",
        "N_star",
        "Nt_vars",
        &format!("{measure}_single"),
        &format!("{measure}_vars"),
    ])?;
    for p in points {
        w.write_record([
            p.n.to_string(),
            p.nt_single.to_string(),
            p.n_star.to_string(),
            p.nt_vars.to_string(),
            p.single.to_string(),
            p.vars.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct HistogramRecord {
    bin_lo: f64,
    bin_hi: f64,
    count_vars: usize,
    count_jansen: usize,
}

pub fn replicate(cfg: &RunConfig) -> Result<()> {
    match cfg.figure.expect("checked by usage_problems") {
        Figure::Fig4a => {
            let count = cfg.replicates.unwrap_or(500);
            let points = fig4a_pf(&cfg.budgets, cfg.h, count, cfg.seed, cfg.tie_tolerance)?;
            write_sweep(&cfg.out.join("fig4a.csv"), &points, "pf")
        }
        Figure::Fig4b => {
            let count = cfg.replicates.unwrap_or(50);
            let points = fig4b_mae(&cfg.budgets, cfg.h, count, cfg.seed)?;
            write_sweep(&cfg.out.join("fig4b.csv"), &points, "mae")
        }
        Figure::Fig5 => run_rows(cfg, &cfg.out.join("fig5.csv")).map(|_| ()),
        Figure::Fig6 => {
            let outcomes = run_rows(cfg, &cfg.out.join("fig6_rows.csv"))?;
            let (rv, rj) = r_values(&outcomes);
            let hv = histogram(&rv, -1.0, 1.0, 40);
            let hj = histogram(&rj, -1.0, 1.0, 40);
            let records = hv.iter().zip(&hj).map(|(v, j)| HistogramRecord {
                bin_lo: v.lo,
                bin_hi: v.hi,
                count_vars: v.count,
                count_jansen: j.count,
            });
            write_csv(&cfg.out.join("fig6.csv"), records)?;
            let fmt = |m: Option<f64>| m.map_or("undefined".to_string(), |v| format!("{v:.4}"));
            eprintln!("median r_vars {}, median r_jansen {}", fmt(median(&rv)), fmt(median(&rj)));
            Ok(())
        }
    }
}

pub fn prepare_out(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    fs::write(cfg.out.join("config.toml"), cfg.to_toml()?)?;
    Ok(())
}
