mod common;

use common::{adaptive_simpson, bisect, sixdim_quadrature_variance, sixdim_reference};
use statrs::function::beta::beta;
use varsobol::distributions::{inv_cdf, Family};
use varsobol::models::{liu_build, sixdim_analytic, sixdim_component};
use varsobol::sampling::{build_ab, sobol_points};
use varsobol::sobol_estimators::jansen_total;

include!("data/sobol_oracle.rs");

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

#[test]
fn sobol_matches_reference_generator() {
    // the reference emits points in Gray-code order; row i there is the
    // natural-order point gray(i), which is our row gray(i) - 1
    let pts = sobol_points(31, 1024, None).unwrap();
    for (i, want) in ORACLE.iter().enumerate() {
        let row = gray(i + 1) - 1;
        for (c, &col) in COLS.iter().enumerate() {
            assert_eq!(pts.get(row, col), want[c], "row {} dim {col}", i + 1);
        }
    }
}

#[test]
fn sobol_prefixes_are_dyadic_grids() {
    for m in 1..=12u32 {
        let n = 1usize << m;
        let pts = sobol_points(n - 1, 1024, None).unwrap();
        for col in [0, 1, 5, 17, 255, 1023] {
            let mut got: Vec<f64> = pts.column(col);
            got.sort_by(f64::total_cmp);
            let want: Vec<f64> = (1..n).map(|j| j as f64 / n as f64).collect();
            assert_eq!(got, want, "m = {m}, column {col}");
        }
    }
}

fn beta_quantile_oracle(a: f64, b: f64, u: f64) -> f64 {
    let norm = beta(a, b);
    let density = move |x: f64| x.powf(a - 1.0) * (1.0 - x).powf(b - 1.0) / norm;
    bisect(&|x| adaptive_simpson(&density, 0.0, x, 1e-14) - u, 0.0, 1.0)
}

#[test]
fn beta_quantiles_match_quadrature_and_bisection() {
    for (a, b, u) in [(2.0, 8.0, 0.25), (8.0, 2.0, 0.25), (2.0, 8.0, 0.9)] {
        let oracle = beta_quantile_oracle(a, b, u);
        let got = inv_cdf(u, &Family::Beta { alpha: a, beta: b });
        assert!((got - oracle).abs() < 1e-8, "Beta({a},{b}) at {u}: {got} vs {oracle}");
    }
}

#[test]
fn quantiles_match_high_precision_values() {
    // 40-digit bisection on the regularized incomplete beta
    let cases = [
        (Family::Beta { alpha: 2.0, beta: 8.0 }, 0.25, 0.107_162_587_746_023_23),
        (Family::Beta { alpha: 8.0, beta: 2.0 }, 0.25, 0.727_730_549_262_488_6),
        (Family::Beta { alpha: 2.0, beta: 0.5 }, 0.5, 0.879_385_241_571_816_8),
        (Family::Beta { alpha: 0.5, beta: 2.0 }, 0.1, 0.004_457_681_887_621_375),
    ];
    for (family, u, want) in cases {
        let got = family.quantile(u);
        assert!((got - want).abs() < 1e-8, "{family:?} at {u}: {got} vs {want}");
    }
    let normal = Family::Normal { mean: 0.5, sd: 0.2 };
    assert!((normal.quantile(0.975) - (0.5 + 0.2 * 1.959_963_984_540_054)).abs() < 1e-12);
}

#[test]
fn clamp_keeps_transforms_finite() {
    for code in 1..=7 {
        let f = Family::from_code(code).unwrap();
        for u in [0.0, 1e-300, 0.5, 1.0 - 1e-17, 1.0] {
            assert!(inv_cdf(u, &f).is_finite(), "{f:?} at {u}");
        }
    }
}

#[test]
fn chi_square_quantiles_match_high_precision_values() {
    let liu = liu_build(0);
    let cases = [
        (0, 0.5, 9.341_817_765_591_967),
        (0, 0.9, 15.987_179_172_105_262),
        (1, 0.5, 13.317_283_970_236_562),
        (1, 0.01, 4.648_076_160_351_508),
    ];
    for (i, u, want) in cases {
        let got = liu.transform(i, u);
        assert!((got - want).abs() < 1e-8 * want, "input {i} at {u}: {got} vs {want}");
    }
}

#[test]
fn sixdim_transcriptions_agree() {
    for i in 0..6 {
        for j in 0..=1000 {
            let x = j as f64 / 1000.0;
            let (a, b) = (sixdim_component(i, x), sixdim_reference(i, x));
            assert!((a - b).abs() < 1e-14, "g{} at {x}: {a} vs {b}", i + 1);
        }
    }
}

#[test]
fn sixdim_closed_form_matches_quadrature() {
    let analytic = sixdim_analytic();
    for i in 0..6 {
        let q = sixdim_quadrature_variance(i);
        assert!((analytic.v[i] - q).abs() < 1e-10, "V{}: {} vs {q}", i + 1, analytic.v[i]);
    }
}

#[test]
fn ignored_inputs_get_exact_zero_totals() {
    let model = |x: &[f64]| (3.0 * x[0]).sin() + x[2] * x[2] * x[1];
    for n in [16, 100, 1000] {
        let design = build_ab(&sobol_points(n, 8, Some(n as u64)).unwrap()).unwrap();
        let out = design.evaluate(|_, u| u, model, false);
        let est = jansen_total(&out.y_a, &out.y_ab).unwrap();
        assert_eq!(est.values[3], 0.0);
        assert!(est.values[0] > 0.0);
    }
}
