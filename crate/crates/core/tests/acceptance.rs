//! Acceptance criteria 1-10, one test each. Every test prints a
//! `criterion N: PASS|FAIL` line with its runtime before asserting.
//!
//! Criterion 9 is slow (tens of minutes) and ignored by default:
//! `cargo test -p varsobol --test acceptance -- --ignored criterion_09`.

mod common;

use std::time::{Duration, Instant};

use common::sixdim_quadrature_variance;
use varsobol::bench::{
    fig4a_pf, fig4b_mae, matched_budgets, meta_analysis, run_all, sample_rows, BenchConfig, HSet,
};
use varsobol::metrics::savage_from_values;
use varsobol::models::{liu_build, sixdim_analytic, sixdim_eval, FnModel};
use varsobol::rng::stream;
use varsobol::sampling::{build_ab, build_stars, sobol_points};
use varsobol::sobol_estimators::{jansen_total, single_trajectory_first};
use varsobol::stats::median;
use varsobol::vars_estimators::{cross_section_stats, ivars, pooled_variogram, vars_to, LagAggregation};

fn report(n: u32, pass: bool, elapsed: Duration, limit: Duration, detail: String) {
    let within = elapsed <= limit;
    let verdict = if pass && within { "PASS" } else { "FAIL" };
    eprintln!(
        "criterion {n}: {verdict} ({:.2}s, limit {:.0}s) {detail}",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    assert!(pass, "criterion {n}: {detail}");
    assert!(within, "criterion {n}: took {elapsed:?}, limit {limit:?}");
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Round to three significant figures.
fn sig3(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let p = 10f64.powi(2 - x.abs().log10().floor() as i32);
    (x * p).round() / p
}

#[test]
fn criterion_01_sixdim_analytic_table() {
    let t = Instant::now();
    let table = [0.0972, 0.136, 0.00358, 0.00301, 0.000587, 0.0];
    let a = sixdim_analytic();
    let mut problems = Vec::new();
    for (i, &want) in table.iter().enumerate() {
        if (sig3(a.v[i]) - want).abs() > 1e-12 {
            problems.push(format!("V{} = {:.6} rounds to {} not {want}", i + 1, a.v[i], sig3(a.v[i])));
        }
        let q = sixdim_quadrature_variance(i);
        if (q - a.v[i]).abs() > 1e-6 {
            problems.push(format!("V{} quadrature {q} vs closed form {}", i + 1, a.v[i]));
        }
    }
    let detail = if problems.is_empty() { "V matches table".into() } else { problems.join("; ") };
    report(1, problems.is_empty(), t.elapsed(), Duration::from_secs(1), detail);
}

#[test]
fn criterion_02_single_trajectory_ranks_at_896_runs() {
    let t = Instant::now();
    let p = fig4a_pf(&[128], 0.1, 500, 1, 0.0).unwrap()[0];
    let detail = format!("N_t = {}, PF single = {:.3} (VARS-TO {:.3})", p.nt_single, p.single, p.vars);
    report(2, p.nt_single == 896 && p.single < 0.05, t.elapsed(), Duration::from_secs(60), detail);
}

#[test]
fn criterion_03_single_trajectory_mae_below_vars_to() {
    let t = Instant::now();
    let points = fig4b_mae(&[16, 32, 64, 128, 256], 0.1, 50, 1).unwrap();
    let pass = points.iter().all(|p| p.single < p.vars);
    let detail = points
        .iter()
        .map(|p| format!("N_t {}/{}: {:.4} vs {:.4}", p.nt_single, p.nt_vars, p.single, p.vars))
        .collect::<Vec<_>>()
        .join(", ");
    report(3, pass, t.elapsed(), Duration::from_secs(300), detail);
}

#[test]
fn criterion_04_liu_totals() {
    let t = Instant::now();
    let liu = liu_build(1);
    let design = build_ab(&sobol_points(1 << 14, 4, Some(1)).unwrap()).unwrap();
    let out = design.evaluate(|col, u| liu.transform(col, u), |x| x[0] / x[1], false);
    let est = out.total().unwrap();
    let (t1, t2) = (est.values[0], est.values[1]);
    let pass = (t1 - 0.5462).abs() <= 0.02 && (t2 - 0.5462).abs() <= 0.02 && (t1 - t2).abs() <= 0.01;
    report(4, pass, t.elapsed(), Duration::from_secs(30), format!("T1 = {t1:.4}, T2 = {t2:.4}"));
}

#[test]
fn criterion_05_variogram_closure() {
    use rand::Rng;
    let t = Instant::now();
    let mut rng = stream(5);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let len = rng.random_range(2..=100);
        let offset = rng.random_range(-50.0..50.0);
        let y: Vec<f64> = (0..len).map(|_| offset + rng.random_range(-10.0..10.0)).collect();
        let scale = y.iter().map(|v| v * v).sum::<f64>() / len as f64;
        for s in cross_section_stats(&y, 1.0 / len as f64, 0.5) {
            let rhs = 0.5 * (s.var_head + s.var_tail) + 0.5 * (s.mean_head - s.mean_tail).powi(2);
            worst = worst.max((s.gamma + s.cov - rhs).abs() / scale);
        }
    }
    report(5, worst <= 1e-12, t.elapsed(), Duration::from_secs(10), format!("max relative residual {worst:.2e}"));
}

#[test]
fn criterion_06_additive_equivalence() {
    let t = Instant::now();
    let analytic = sixdim_analytic().s;
    let stars = build_stars(&sobol_points(50, 6, Some(1)).unwrap(), 0.1).unwrap();
    let y = stars.evaluate(|_, u| u, sixdim_eval);
    let vars = vars_to(&stars, &y, LagAggregation::MeanOverLags).unwrap().estimate.values;
    let ab = build_ab(&sobol_points(1 << 12, 12, Some(1)).unwrap()).unwrap();
    let out = ab.evaluate(|_, u| u, sixdim_eval, false);
    let jansen = jansen_total(&out.y_a, &out.y_ab).unwrap().values;
    let mut worst: f64 = 0.0;
    for i in 0..6 {
        for (a, b) in [(vars[i], jansen[i]), (vars[i], analytic[i]), (jansen[i], analytic[i])] {
            worst = worst.max((a - b).abs());
        }
    }
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    let detail = format!(
        "max pairwise gap {worst:.3}; VARS-TO [{}], Jansen [{}], analytic [{}]",
        fmt(&vars),
        fmt(&jansen),
        fmt(&analytic)
    );
    report(6, worst <= 0.02, t.elapsed(), Duration::from_secs(60), detail);
}

#[test]
fn criterion_07_budget_matching() {
    let t = Instant::now();
    let rows = sample_rows(10_000, 1, HSet::Table1);
    let diffs: Vec<usize> = rows
        .iter()
        .map(|r| {
            let (nt_vars, _, nt_jansen) = matched_budgets(r).unwrap();
            nt_vars.abs_diff(nt_jansen)
        })
        .collect();
    let max = *diffs.iter().max().unwrap();
    let within10 = diffs.iter().filter(|&&d| d <= 10).count() as f64 / diffs.len() as f64;
    let detail = format!("max |diff| = {max} (bound 25), share <= 10 = {:.3} (needs 0.90)", within10);
    report(7, max <= 25 && within10 >= 0.9, t.elapsed(), Duration::from_secs(10), detail);
}

#[test]
fn criterion_08_scaled_benchmark() {
    let t = Instant::now();
    let config = BenchConfig::default();
    let rows = sample_rows(128, config.master_seed, config.h_set);
    let outcomes = run_all(&rows, &config, workers(), |_| {}).unwrap();
    let pick = |f: fn(&varsobol::bench::RowResult) -> Option<f64>| -> Vec<f64> {
        outcomes
            .iter()
            .map(|o| o.as_ref().ok().and_then(f).unwrap_or(f64::NAN))
            .collect()
    };
    let rv = median(&pick(|r| r.r_vars)).unwrap_or(f64::NAN);
    let rj = median(&pick(|r| r.r_jansen)).unwrap_or(f64::NAN);
    let pass = rj >= 0.95 && rv >= 0.90 && rj >= rv;
    report(8, pass, t.elapsed(), Duration::from_secs(900), format!("median r_jansen {rj:.4}, r_vars {rv:.4}"));
}

#[test]
#[ignore = "slow: runs 11 x 1024 benchmark rows"]
fn criterion_09_scaled_meta_analysis() {
    let t = Instant::now();
    let result = meta_analysis(1 << 10, &BenchConfig::default(), workers(), 500, 0.95, |_| {}).unwrap();
    let top = result
        .indices
        .iter()
        .max_by(|a, b| a.ti.total_cmp(&b.ti))
        .unwrap();
    let get = |name: &str| result.indices.iter().find(|m| m.parameter == name).unwrap();
    let (k2, k3) = (get("k2"), get("k3"));
    let small = |m: &varsobol::bench::MetaIndex| m.si < 0.05 && m.ti < 0.05;
    let pass = top.parameter == "phi" && small(k2) && small(k3);
    let table = result
        .indices
        .iter()
        .map(|m| format!("{} S {:.3} T {:.3}", m.parameter, m.si, m.ti))
        .collect::<Vec<_>>()
        .join("; ");
    report(9, pass, t.elapsed(), Duration::from_secs(3600), format!("largest T: {}; {table}", top.parameter));
}

#[test]
fn criterion_10_property_suite() {
    let t = Instant::now();
    let mut problems = Vec::new();

    // affine rescaling of the outputs leaves every index unchanged
    let model = |x: &[f64]| x[0].exp() * x[1] + (4.0 * x[2]).sin() + x[0] * x[2].powi(2);
    let ab = build_ab(&sobol_points(256, 6, Some(3)).unwrap()).unwrap();
    let out = ab.evaluate(|_, u| u, model, false);
    let affine = |y: &[f64]| y.iter().map(|v| -37.5 * v + 1e3).collect::<Vec<f64>>();
    let y_ab2: Vec<Vec<f64>> = out.y_ab.iter().map(|c| affine(c)).collect();
    let t1 = jansen_total(&out.y_a, &out.y_ab).unwrap().values;
    let t2 = jansen_total(&affine(&out.y_a), &y_ab2).unwrap().values;
    let stars = build_stars(&sobol_points(8, 3, Some(3)).unwrap(), 0.1).unwrap();
    let y = stars.evaluate(|_, u| u, model);
    let v1 = vars_to(&stars, &y, LagAggregation::MeanOverLags).unwrap().estimate.values;
    let v2 = vars_to(&stars, &affine(&y), LagAggregation::MeanOverLags).unwrap().estimate.values;
    let gap = t1.iter().zip(&t2).chain(v1.iter().zip(&v2)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > 1e-12 {
        problems.push(format!("affine gap {gap:.2e}"));
    }

    // anchor independence on an additive model
    let additive = FnModel::new(4, "additive", |x: &[f64]| (2.0 * x[0]).sin() + x[1].powi(3) - 0.5 * x[2]);
    let anchors = [[0.1, 0.2, 0.3, 0.4], [0.9, 0.05, 0.7, 0.5], [0.5; 4]];
    for i in 0..4 {
        let s: Vec<f64> = anchors
            .iter()
            .map(|a| single_trajectory_first(&additive, i, a, 1000, 0.25).unwrap())
            .collect();
        let spread = s.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)) - s.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        if spread > 1e-12 {
            problems.push(format!("anchor spread {spread:.2e} on input {i}"));
        }
    }

    // Savage scores sum to k
    for values in [vec![0.3, 0.1, 0.9, 0.2], vec![1.0; 7], vec![0.5, 0.5, 0.1, 0.2, 0.2, 0.9]] {
        let sum: f64 = savage_from_values(&values).iter().sum();
        if (sum - values.len() as f64).abs() > 1e-12 {
            problems.push(format!("Savage sum {sum} for k = {}", values.len()));
        }
    }

    // exact zero totals for an ignored input
    let ignoring = |x: &[f64]| x[0] * x[1] + x[2].cos();
    let ab = build_ab(&sobol_points(512, 8, Some(4)).unwrap()).unwrap();
    let o = ab.evaluate(|_, u| u, ignoring, false);
    let z = jansen_total(&o.y_a, &o.y_ab).unwrap().values[3];
    if z != 0.0 {
        problems.push(format!("ignored input total {z}"));
    }

    // IVARS_50 of f(x) = x against 1/48, within the trapezoid bound
    let h = 0.1;
    let linear = build_stars(&sobol_points(16, 1, Some(6)).unwrap(), h).unwrap();
    let y = linear.evaluate(|_, u| u, |x| x[0]);
    let gamma = pooled_variogram(&linear, &y, 0).unwrap();
    let area = ivars(&gamma, 0.5).unwrap();
    let bound = 0.5 * h * h / 12.0 + 1e-12;
    if (area - 1.0 / 48.0).abs() > bound {
        problems.push(format!("IVARS_50 = {area} vs 1/48 (bound {bound:.2e})"));
    }

    let detail = if problems.is_empty() { "all properties hold".into() } else { problems.join("; ") };
    report(10, problems.is_empty(), t.elapsed(), Duration::from_secs(60), detail);
}
