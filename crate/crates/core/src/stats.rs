//! Small descriptive statistics shared by the estimators.
//!
//! Variances use population (divide-by-n) normalization throughout.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    // one refinement pass; makes the mean of a constant vector exact
    m + xs.iter().map(|x| x - m).sum::<f64>() / n
}

/// Two-pass population variance.
pub fn population_variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// True when a variance should be treated as zero: non-finite, non-positive,
/// or indistinguishable from the rounding noise of a constant vector.
pub fn is_degenerate_variance(variance: f64, mean: f64) -> bool {
    !variance.is_finite()
        || variance <= 0.0
        || variance <= 16.0 * f64::EPSILON * f64::EPSILON * mean * mean
}

/// Pearson correlation. `None` when either vector has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return None;
    }
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let da = a - mx;
        let db = b - my;
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    let vx = sxx / x.len() as f64;
    let vy = syy / y.len() as f64;
    if is_degenerate_variance(vx, mx) || is_degenerate_variance(vy, my) {
        return None;
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    r.is_finite().then(|| r.clamp(-1.0, 1.0))
}

/// Linear-interpolation quantile of an already sorted slice.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Median of a slice, ignoring NaN entries. `None` if nothing is left.
pub fn median(xs: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = xs.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    Some(quantile_sorted(&v, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_variance_divides_by_n() {
        assert_eq!(population_variance(&[1.0, 3.0]), 1.0);
    }

    #[test]
    fn constant_vector_is_degenerate() {
        let xs = [0.1 + 0.2; 7];
        assert!(is_degenerate_variance(population_variance(&xs), mean(&xs)));
        assert_eq!(pearson(&xs, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]), None);
    }

    #[test]
    fn pearson_of_affine_copy_is_one() {
        let x = [0.3, 1.0, -2.0, 4.5];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quantiles_interpolate() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&s, 0.5), 3.0);
        assert_eq!(quantile_sorted(&s, 0.125), 1.5);
        assert_eq!(median(&[f64::NAN, 2.0, 1.0]), Some(1.5));
    }
}
