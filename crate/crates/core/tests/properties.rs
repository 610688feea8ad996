use proptest::prelude::*;
use varsobol::metrics::{prob_failure, ranks, savage_from_values, savage_scores};
use varsobol::models::FnModel;
use varsobol::sampling::{build_ab, build_stars, random_points, sobol_points, SampleMatrix};
use varsobol::sobol_estimators::{jansen_first, jansen_total, single_trajectory_first};
use varsobol::vars_estimators::{cross_section_stats, vars_to, LagAggregation};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn interacting(x: &[f64]) -> f64 {
    x[0].exp() * x[1] + (4.0 * x[2]).sin() + x[0] * x[2].powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn indices_are_affine_invariant(
        n in 8usize..200,
        seed in any::<u64>(),
        scale in prop_oneof![-1e3..-1e-3, 1e-3..1e3f64],
        shift in -1e4..1e4f64,
    ) {
        let design = build_ab(&random_points(n, 6, seed)).unwrap();
        let out = design.evaluate(|_, u| u, interacting, true);
        let affine = |y: &[f64]| y.iter().map(|v| scale * v + shift).collect::<Vec<_>>();
        let y_ab2: Vec<Vec<f64>> = out.y_ab.iter().map(|c| affine(c)).collect();

        let t = jansen_total(&out.y_a, &out.y_ab).unwrap();
        let t2 = jansen_total(&affine(&out.y_a), &y_ab2).unwrap();
        let y_b = out.y_b.as_ref().unwrap();
        let v = varsobol::stats::population_variance(&out.y_a);
        let f = jansen_first(y_b, &out.y_ab, v).unwrap();
        let f2 = jansen_first(&affine(y_b), &y_ab2, scale * scale * v).unwrap();
        for i in 0..3 {
            prop_assert!(close(t.values[i], t2.values[i], 1e-9), "{:?} {:?}", t.values, t2.values);
            prop_assert!((f.values[i] - f2.values[i]).abs() < 1e-9, "{:?} {:?}", f.values, f2.values);
        }

        let stars = build_stars(&random_points(4, 3, seed), 0.1).unwrap();
        let y = stars.evaluate(|_, u| u, interacting);
        let a = vars_to(&stars, &y, LagAggregation::MeanOverLags).unwrap().estimate;
        let b = vars_to(&stars, &affine(&y), LagAggregation::MeanOverLags).unwrap().estimate;
        for i in 0..3 {
            prop_assert!((a.values[i] - b.values[i]).abs() < 1e-9, "{:?} {:?}", a.values, b.values);
        }
    }

    #[test]
    fn ab_matrices_differ_from_a_in_one_column(n in 1usize..40, k in 1usize..8, seed in any::<u64>()) {
        let base = random_points(n, 2 * k, seed);
        let d = build_ab(&base).unwrap();
        for i in 0..k {
            let ab = d.ab(i);
            for r in 0..n {
                for c in 0..k {
                    let want = if c == i { d.b().get(r, c) } else { d.a().get(r, c) };
                    prop_assert_eq!(ab.get(r, c), want);
                }
            }
        }
        prop_assert_eq!(d.total_order_cost(), n * (k + 1));
    }

    #[test]
    fn star_design_counts(
        n_star in 1usize..20,
        k in 1usize..10,
        inv_h in prop::sample::select(vec![2usize, 4, 5, 10, 20, 100]),
        seed in any::<u64>(),
    ) {
        let h = 1.0 / inv_h as f64;
        let design = build_stars(&random_points(n_star, k, seed), h).unwrap();
        prop_assert_eq!(design.len(), n_star * (k * (inv_h - 1) + 1));
        let pts = design.points();
        for s in 0..n_star {
            for i in 0..k {
                let sec = design.section(s, i);
                prop_assert_eq!(sec.len(), inv_h);
                let grid = design.section_grid(s, i);
                prop_assert!(grid.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(grid.iter().all(|&g| (0.0..1.0).contains(&g)));
                for (j, &p) in sec.iter().enumerate() {
                    for c in 0..k {
                        let want = if c == i { grid[j] } else { design.centers().get(s, c) };
                        prop_assert_eq!(pts.get(p, c), want);
                    }
                }
            }
        }
    }

    #[test]
    fn variogram_closure(y in prop::collection::vec(-1e3..1e3f64, 2..60)) {
        let h = 1.0 / y.len() as f64;
        for s in cross_section_stats(&y, h, 0.5) {
            let rhs = 0.5 * (s.var_head + s.var_tail) + 0.5 * (s.mean_head - s.mean_tail).powi(2);
            let scale = y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
            prop_assert!((s.gamma + s.cov - rhs).abs() <= 1e-12 * scale.max(1e-300));
        }
    }

    #[test]
    fn savage_scores_sum_to_k(values in prop::collection::vec(-5i32..5, 1..30)) {
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        let k = values.len() as f64;
        prop_assert!((savage_from_values(&values).iter().sum::<f64>() - k).abs() < 1e-10);
        let r = ranks(&values);
        prop_assert!((r.iter().sum::<f64>() - k * (k + 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn savage_scores_of_permutations(perm in Just((1..=12usize).collect::<Vec<_>>()).prop_shuffle()) {
        let s = savage_scores(&perm).unwrap();
        prop_assert!((s.iter().sum::<f64>() - 12.0).abs() < 1e-12);
        for (a, b) in perm.iter().zip(&s) {
            for (c, d) in perm.iter().zip(&s) {
                if a < c {
                    prop_assert!(b > d);
                }
            }
        }
    }

    #[test]
    fn pf_is_monotone_in_tie_tolerance(
        truth in prop::collection::vec(0.0..1.0f64, 3..8),
        noise in prop::collection::vec(prop::collection::vec(-0.3..0.3f64, 8), 1..30),
        t1 in 0.0..0.2f64,
        dt in 0.0..0.2f64,
    ) {
        let reps: Vec<Vec<f64>> = noise
            .iter()
            .map(|e| truth.iter().zip(e).map(|(t, e)| t + e).collect())
            .collect();
        let strict = prob_failure(&truth, &reps, t1).unwrap();
        let loose = prob_failure(&truth, &reps, t1 + dt).unwrap();
        prop_assert!(loose <= strict);
        prop_assert_eq!(prob_failure(&truth, std::slice::from_ref(&truth), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn single_trajectory_ignores_the_anchor_on_additive_models(
        a1 in prop::collection::vec(0.0..1.0f64, 4),
        a2 in prop::collection::vec(0.0..1.0f64, 4),
        grid in 8usize..400,
    ) {
        let model = FnModel::new(4, "additive", |x: &[f64]| {
            (2.0 * x[0]).sin() + x[1].powi(3) - 0.5 * x[2] + 7.0
        });
        for i in 0..4 {
            let s1 = single_trajectory_first(&model, i, &a1, grid, 0.3).unwrap();
            let s2 = single_trajectory_first(&model, i, &a2, grid, 0.3).unwrap();
            prop_assert!((s1 - s2).abs() <= 1e-12, "input {}: {} vs {}", i, s1, s2);
        }
    }

    #[test]
    fn additive_totals_match_first_orders_in_the_limit(seed in 0u64..1000) {
        let model = |x: &[f64]| 2.0 * x[0] + x[1] * x[1] + (3.0 * x[2]).cos();
        let d = build_ab(&sobol_points(4096, 6, Some(seed)).unwrap()).unwrap();
        let out = d.evaluate(|_, u| u, model, true);
        let t = out.total().unwrap();
        let f = out.first().unwrap();
        for i in 0..3 {
            prop_assert!((t.values[i] - f.values[i]).abs() < 0.02, "{:?} {:?}", t.values, f.values);
        }
    }
}

#[test]
fn sample_matrix_rejects_bad_shapes() {
    assert!(SampleMatrix::new(2, 2, vec![0.1; 3]).is_err());
    assert!(SampleMatrix::new(1, 2, vec![0.1, 1.0]).is_err());
}
