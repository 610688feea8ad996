#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let pieces = 256;
    let w = (b - a) / pieces as f64;
    (0..pieces)
        .map(|p| {
            let (lo, hi) = (a + p as f64 * w, a + (p + 1) as f64 * w);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            rec(f, lo, hi, fa, fm, fb, simpson(fa, fm, fb, lo, hi), tol / pieces as f64, 40)
        })
        .sum()
}

/// Root of increasing `g` on `[lo, hi]` by bisection.
pub fn bisect(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if g(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// The six component functions, typed in directly rather than through the
/// shared template.
pub fn sixdim_reference(i: usize, x: f64) -> f64 {
    use std::f64::consts::PI;
    match i {
        0 => -(PI * x).sin() - 0.3 * (3.33 * PI * x).sin(),
        1 => -0.76 * (PI * (x - 0.2)).sin() - 0.315,
        2 => -0.12 * (1.05 * PI * (x - 0.2)).sin() - 0.02 * (95.24 * PI * x).sin() - 0.96,
        3 => -0.12 * (1.05 * PI * (x - 0.2)).sin() - 0.96,
        4 => -0.05 * (PI * (x - 0.2)).sin() - 1.02,
        5 => -1.08,
        _ => unreachable!(),
    }
}

/// Variance of component `i` under a uniform input, by quadrature.
pub fn sixdim_quadrature_variance(i: usize) -> f64 {
    let m1 = adaptive_simpson(&|x| sixdim_reference(i, x), 0.0, 1.0, 1e-13);
    adaptive_simpson(&|x| (sixdim_reference(i, x) - m1).powi(2), 0.0, 1.0, 1e-13)
}
