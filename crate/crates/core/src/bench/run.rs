use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{matched_budgets, BenchConfig, BenchError, BenchmarkRow};
use crate::distributions::{resolve_phi, DistributionSpec, Family};
use crate::metrics::{performance_r, Delta};
use crate::models::{metafunction_build, MetafunctionSpec, Model};
use crate::rng::derive_seed;
use crate::sampling::{build_ab, build_stars, random_points, sobol_points, SampleMatrix, SobolSequence};
use crate::sobol_estimators::SensitivityEstimate;
use crate::vars_estimators::{vars_to, LagAggregation};

const PHI_STREAM: u64 = 1;
const CENTER_STREAM: u64 = 2;
const BASE_STREAM: u64 = 3;

/// Metafunction composed with the row's input distributions.
///
/// Quantiles are memoized per `(family, u)`: the quasi-random designs reuse
/// the same coordinate values across columns and rows.
pub struct RowModel {
    meta: MetafunctionSpec,
    families: Vec<Family>,
    slot: Vec<usize>,
    memo: Mutex<HashMap<(usize, u64), f64>>,
}

impl RowModel {
    pub fn new(row: &BenchmarkRow, phi_seed: u64) -> Result<Self, BenchError> {
        let meta = metafunction_build(row.k, row.eps, row.k2, row.k3)?;
        let dist = resolve_phi(row.phi, row.k, phi_seed)?;
        Ok(Self::from_parts(meta, &dist))
    }

    pub fn from_parts(meta: MetafunctionSpec, dist: &DistributionSpec) -> Self {
        assert_eq!(meta.k(), dist.per_input().len(), "one family per input");
        let mut families: Vec<Family> = Vec::new();
        let slot = dist
            .per_input()
            .iter()
            .map(|f| match families.iter().position(|g| g == f) {
                Some(p) => p,
                None => {
                    families.push(*f);
                    families.len() - 1
                }
            })
            .collect();
        Self {
            meta,
            families,
            slot,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn metafunction(&self) -> &MetafunctionSpec {
        &self.meta
    }

    fn quantile(&self, col: usize, u: f64) -> f64 {
        let slot = self.slot[col];
        let family = &self.families[slot];
        if *family == Family::Uniform {
            return crate::distributions::inv_cdf(u, family);
        }
        *self
            .memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .entry((slot, u.to_bits()))
            .or_insert_with(|| crate::distributions::inv_cdf(u, family))
    }

    /// Univariate effect of input `col` at unit value `u`.
    pub fn effect(&self, col: usize, u: f64) -> f64 {
        self.meta.effect(col, self.quantile(col, u))
    }

    pub fn output(&self, effects: &[f64]) -> f64 {
        self.meta.eval_effects(effects)
    }

    /// Output at a unit-hypercube point.
    pub fn eval_unit(&self, u: &[f64]) -> f64 {
        let e: Vec<f64> = u.iter().enumerate().map(|(c, &v)| self.effect(c, v)).collect();
        self.output(&e)
    }
}

impl Model for RowModel {
    fn dim(&self) -> usize {
        self.meta.k()
    }

    fn eval(&self, u: &[f64]) -> f64 {
        self.eval_unit(u)
    }

    fn label(&self) -> String {
        self.meta.label()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowResult {
    pub row: BenchmarkRow,
    pub nt_vars: usize,
    pub nt_jansen: usize,
    pub r_vars: Option<f64>,
    pub r_jansen: Option<f64>,
    pub flag_vars: bool,
    pub flag_jansen: bool,
    /// Reference total-order indices.
    pub truth: Vec<f64>,
    pub wall_seconds: f64,
}

pub type RowOutcome = Result<RowResult, (BenchmarkRow, String)>;

/// One line of the benchmark result table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub row: usize,
    #[serde(rename = "N_star")]
    pub n_star: usize,
    pub h: f64,
    pub k: usize,
    pub eps: u64,
    pub tau: u8,
    pub phi: u8,
    pub k2: f64,
    pub k3: f64,
    pub delta: u8,
    #[serde(rename = "Nt_vars")]
    pub nt_vars: usize,
    #[serde(rename = "Nt_jansen")]
    pub nt_jansen: usize,
    pub r_vars: f64,
    pub r_jansen: f64,
    pub flag_vars: u8,
    pub flag_jansen: u8,
}

impl BenchmarkRecord {
    pub fn from_outcome(outcome: &RowOutcome) -> Self {
        let (row, res) = match outcome {
            Ok(r) => (&r.row, Some(r)),
            Err((row, _)) => (row, None),
        };
        let budgets = matched_budgets(row).unwrap_or((0, 0, 0));
        Self {
            row: row.id,
            n_star: row.n_star,
            h: row.h,
            k: row.k,
            eps: row.eps,
            tau: row.tau,
            phi: row.phi,
            k2: row.k2,
            k3: row.k3,
            delta: row.delta,
            nt_vars: res.map_or(budgets.0, |r| r.nt_vars),
            nt_jansen: res.map_or(budgets.2, |r| r.nt_jansen),
            r_vars: res.and_then(|r| r.r_vars).unwrap_or(f64::NAN),
            r_jansen: res.and_then(|r| r.r_jansen).unwrap_or(f64::NAN),
            flag_vars: res.map_or(1, |r| r.flag_vars as u8),
            flag_jansen: res.map_or(1, |r| r.flag_jansen as u8),
        }
    }
}

fn validate(row: &BenchmarkRow) -> Result<(), BenchError> {
    let bad = |m: String| Err(BenchError::InvalidRow(m));
    if row.n_star == 0 {
        return bad("N_star must be positive".into());
    }
    if !(1..=2).contains(&row.tau) {
        return bad(format!("sampler code {} is outside 1..=2", row.tau));
    }
    Delta::from_code(row.delta)?;
    Ok(())
}

/// Unscrambled Sobol' points `x_s, ..., x_{s+n-1}` with `s` the smallest
/// power of two at least `max(n, 2^13)`; disjoint from every base design
/// prefix used by a row.
fn truth_points(n: usize, d: usize) -> Result<SampleMatrix, BenchError> {
    let start = n.max(1 << 13).next_power_of_two();
    let mut seq = SobolSequence::new(d)?;
    let mut sink = vec![0.0; d];
    for _ in 1..start {
        seq.next_into(&mut sink);
    }
    Ok(seq.take_matrix(n))
}

fn correlation(delta: Delta, truth: &SensitivityEstimate, est: &SensitivityEstimate) -> Result<Option<f64>, BenchError> {
    if truth.degenerate || est.degenerate {
        return Ok(None);
    }
    Ok(performance_r(delta, &truth.values, &est.values)?)
}

/// Run one benchmark row: matched-budget VARS-TO and Jansen estimates,
/// both scored against a large-sample Jansen reference.
pub fn run_row(row: &BenchmarkRow, config: &BenchConfig) -> Result<RowResult, BenchError> {
    let start = Instant::now();
    validate(row)?;
    let delta = Delta::from_code(row.delta)?;
    // keyed by eps, not by row position
    let row_seed = derive_seed(config.master_seed, row.eps);
    let model = RowModel::new(row, derive_seed(row_seed, PHI_STREAM))?;
    let (nt_vars, n, nt_jansen) = matched_budgets(row)?;
    let k = row.k;

    let (centers, base) = match row.tau {
        1 => (
            random_points(row.n_star, k, derive_seed(row_seed, CENTER_STREAM)),
            random_points(n, 2 * k, derive_seed(row_seed, BASE_STREAM)),
        ),
        _ => (sobol_points(row.n_star, k, None)?, sobol_points(n, 2 * k, None)?),
    };
    let map = |c: usize, u: f64| model.effect(c, u);
    let out = |e: &[f64]| model.output(e);

    let stars = build_stars(&centers, row.h)?;
    let y_stars = stars.evaluate(map, out);
    let vars = vars_to(&stars, &y_stars, LagAggregation::MeanOverLags)?.estimate;

    let jansen = build_ab(&base)?.evaluate(map, out, false).total()?;

    let truth = build_ab(&truth_points(config.truth_n, 2 * k)?)?
        .evaluate(map, out, false)
        .total()?;

    let r_vars = correlation(delta, &truth, &vars)?;
    let r_jansen = correlation(delta, &truth, &jansen)?;
    Ok(RowResult {
        row: *row,
        nt_vars,
        nt_jansen,
        r_vars,
        r_jansen,
        flag_vars: r_vars.is_none(),
        flag_jansen: r_jansen.is_none(),
        truth: truth.values,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Run every row on a pool of `workers` threads. Results come back in row
/// order and do not depend on `workers`; `on_result` sees each outcome as
/// soon as its chunk completes.
pub fn run_all<F>(
    rows: &[BenchmarkRow],
    config: &BenchConfig,
    workers: usize,
    mut on_result: F,
) -> Result<Vec<RowOutcome>, BenchError>
where
    F: FnMut(&RowOutcome),
{
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    let mut out = Vec::with_capacity(rows.len());
    for chunk in rows.chunks(4 * workers) {
        let results: Vec<RowOutcome> = pool.install(|| {
            chunk
                .par_iter()
                .map(|row| run_row(row, config).map_err(|e| (*row, e.to_string())))
                .collect()
        });
        for r in results {
            on_result(&r);
            out.push(r);
        }
    }
    Ok(out)
}
