//! Pick-freeze and star designs.

use super::{SampleMatrix, SamplingError};
use crate::sobol_estimators::PickFreezeOutputs;

/// `A`, `B` and the `k` matrices `A_B^(i)`.
///
/// Only `A` and `B` are stored; `A_B^(i)` is assembled on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignAB {
    a: SampleMatrix,
    b: SampleMatrix,
}

/// Split an `(N, 2k)` base matrix: `A` takes the first `k` columns, `B` the
/// last `k`.
pub fn build_ab(base: &SampleMatrix) -> Result<DesignAB, SamplingError> {
    if !base.cols().is_multiple_of(2) {
        return Err(SamplingError::OddColumnCount(base.cols()));
    }
    let k = base.cols() / 2;
    Ok(DesignAB {
        a: base.columns(0, k),
        b: base.columns(k, 2 * k),
    })
}

impl DesignAB {
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn k(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &SampleMatrix {
        &self.a
    }

    pub fn b(&self) -> &SampleMatrix {
        &self.b
    }

    /// `A` with column `i` taken from `B`.
    pub fn ab(&self, i: usize) -> SampleMatrix {
        assert!(i < self.k());
        let mut values = self.a.values().to_vec();
        let k = self.k();
        for r in 0..self.n() {
            values[r * k + i] = self.b.get(r, i);
        }
        SampleMatrix::from_parts(self.n(), k, values)
    }

    /// Evaluations needed for total-order indices (`A` and every `A_B^(i)`).
    pub fn total_order_cost(&self) -> usize {
        self.n() * (self.k() + 1)
    }

    /// Evaluate `model` on `A`, every `A_B^(i)` and, if `with_b`, on `B`.
    ///
    /// `map(column, u)` is applied once per stored coordinate and `model`
    /// sees mapped rows, shared between `A` and the `A_B^(i)` rows.
    pub fn evaluate<T, M, F>(&self, map: M, model: F, with_b: bool) -> PickFreezeOutputs
    where
        T: Copy,
        M: Fn(usize, f64) -> T,
        F: Fn(&[T]) -> f64,
    {
        let (n, k) = (self.n(), self.k());
        let map_matrix = |m: &SampleMatrix| -> Vec<T> {
            m.values()
                .iter()
                .enumerate()
                .map(|(idx, &u)| map(idx % k.max(1), u))
                .collect()
        };
        let ma = map_matrix(&self.a);
        let mb = map_matrix(&self.b);
        let y_a: Vec<f64> = ma.chunks_exact(k.max(1)).take(n).map(&model).collect();
        let y_b = with_b.then(|| mb.chunks_exact(k.max(1)).take(n).map(&model).collect());
        let mut y_ab = Vec::with_capacity(k);
        let mut buf: Vec<T> = Vec::with_capacity(k);
        for i in 0..k {
            let mut col = Vec::with_capacity(n);
            for r in 0..n {
                buf.clear();
                buf.extend_from_slice(&ma[r * k..(r + 1) * k]);
                buf[i] = mb[r * k + i];
                col.push(model(&buf));
            }
            y_ab.push(col);
        }
        PickFreezeOutputs { y_a, y_b, y_ab }
    }
}

/// STAR-VARS design: `N_star` centers, each with one equally spaced
/// cross-section per input passing through the center.
///
/// Point layout, star by star: the center first, then for each input `i`
/// the `1/h - 1` non-center grid points of section `i` in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct StarDesign {
    centers: SampleMatrix,
    h: f64,
    grid_len: usize,
    /// Grid values indexed `(star * k + input) * grid_len + j`.
    grids: Vec<f64>,
    /// Position of the center within each section, indexed `star * k + input`.
    center_slots: Vec<usize>,
}

/// Number of grid points `1/h`, if `h` is the reciprocal of an integer >= 2.
pub(crate) fn grid_len_for(h: f64) -> Result<usize, SamplingError> {
    if !(h > 0.0 && h <= 0.5) {
        return Err(SamplingError::InvalidSpacing(h));
    }
    let inv = 1.0 / h;
    let n = inv.round();
    if (inv - n).abs() > 1e-9 * n {
        return Err(SamplingError::InvalidSpacing(h));
    }
    Ok(n as usize)
}

const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Build cross-sections anchored at `center mod h`, so every section has
/// exactly `1/h` points and contains its center.
pub fn build_stars(centers: &SampleMatrix, h: f64) -> Result<StarDesign, SamplingError> {
    let grid_len = grid_len_for(h)?;
    let k = centers.cols();
    let mut grids = Vec::with_capacity(centers.rows() * k * grid_len);
    let mut center_slots = Vec::with_capacity(centers.rows() * k);
    for row in centers.iter_rows() {
        for &c in row {
            let slot = ((c * grid_len as f64).floor() as usize).min(grid_len - 1);
            for j in 0..grid_len {
                let value = if j == slot {
                    c
                } else {
                    (c + (j as f64 - slot as f64) * h).clamp(0.0, BELOW_ONE)
                };
                grids.push(value);
            }
            center_slots.push(slot);
        }
    }
    Ok(StarDesign {
        centers: centers.clone(),
        h,
        grid_len,
        grids,
        center_slots,
    })
}

impl StarDesign {
    pub fn centers(&self) -> &SampleMatrix {
        &self.centers
    }

    pub fn n_star(&self) -> usize {
        self.centers.rows()
    }

    pub fn k(&self) -> usize {
        self.centers.cols()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Points per cross-section, `1/h`.
    pub fn grid_len(&self) -> usize {
        self.grid_len
    }

    fn per_star(&self) -> usize {
        self.k() * (self.grid_len - 1) + 1
    }

    /// Total number of distinct points, `N_star [k (1/h - 1) + 1]`.
    pub fn len(&self) -> usize {
        self.n_star() * self.per_star()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates of section `(star, input)`, ascending.
    pub fn section_grid(&self, star: usize, input: usize) -> &[f64] {
        let s = (star * self.k() + input) * self.grid_len;
        &self.grids[s..s + self.grid_len]
    }

    pub fn center_slot(&self, star: usize, input: usize) -> usize {
        self.center_slots[star * self.k() + input]
    }

    /// Point indices of section `(star, input)` ordered along the grid.
    pub fn section(&self, star: usize, input: usize) -> Vec<usize> {
        let base = star * self.per_star();
        let slot = self.center_slot(star, input);
        let first = base + 1 + input * (self.grid_len - 1);
        (0..self.grid_len)
            .map(|j| match j.cmp(&slot) {
                std::cmp::Ordering::Equal => base,
                std::cmp::Ordering::Less => first + j,
                std::cmp::Ordering::Greater => first + j - 1,
            })
            .collect()
    }

    /// Outputs of section `(star, input)` in grid order.
    pub fn section_outputs(&self, outputs: &[f64], star: usize, input: usize) -> Vec<f64> {
        self.section(star, input).into_iter().map(|p| outputs[p]).collect()
    }

    /// Write point `idx` into `out` (length `k`).
    pub fn point_into(&self, idx: usize, out: &mut [f64]) {
        let star = idx / self.per_star();
        let r = idx % self.per_star();
        out.copy_from_slice(self.centers.row(star));
        if r > 0 {
            let input = (r - 1) / (self.grid_len - 1);
            let jj = (r - 1) % (self.grid_len - 1);
            let j = if jj >= self.center_slot(star, input) { jj + 1 } else { jj };
            out[input] = self.section_grid(star, input)[j];
        }
    }

    /// All design points as a matrix, in layout order.
    pub fn points(&self) -> SampleMatrix {
        let k = self.k();
        let mut values = vec![0.0; self.len() * k];
        for (idx, row) in values.chunks_exact_mut(k.max(1)).enumerate().take(self.len()) {
            self.point_into(idx, row);
        }
        SampleMatrix::from_parts(self.len(), k, values)
    }

    /// Evaluate `model` at every point in layout order, mapping each
    /// distinct coordinate value once (see [`DesignAB::evaluate`]).
    pub fn evaluate<T, M, F>(&self, map: M, model: F) -> Vec<f64>
    where
        T: Copy,
        M: Fn(usize, f64) -> T,
        F: Fn(&[T]) -> f64,
    {
        let k = self.k();
        let n = self.grid_len;
        let mapped_grids: Vec<T> = self
            .grids
            .iter()
            .enumerate()
            .map(|(idx, &u)| map((idx / n) % k, u))
            .collect();
        let mut out = Vec::with_capacity(self.len());
        let mut buf: Vec<T> = Vec::with_capacity(k);
        for star in 0..self.n_star() {
            buf.clear();
            for i in 0..k {
                buf.push(mapped_grids[(star * k + i) * n + self.center_slot(star, i)]);
            }
            out.push(model(&buf));
            for i in 0..k {
                let saved = buf[i];
                let slot = self.center_slot(star, i);
                let section = &mapped_grids[(star * k + i) * n..(star * k + i + 1) * n];
                for (j, &value) in section.iter().enumerate() {
                    if j != slot {
                        buf[i] = value;
                        out.push(model(&buf));
                    }
                }
                buf[i] = saved;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_input_split_makes_ab_equal_b() {
        let base = SampleMatrix::new(2, 2, vec![0.1, 0.9, 0.2, 0.8]).unwrap();
        let d = build_ab(&base).unwrap();
        assert_eq!(d.a().values(), &[0.1, 0.2]);
        assert_eq!(d.b().values(), &[0.9, 0.8]);
        assert_eq!(&d.ab(0), d.b());
    }

    #[test]
    fn ab_substitutes_one_column() {
        let base = SampleMatrix::new(1, 4, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let d = build_ab(&base).unwrap();
        assert_eq!(d.ab(0).row(0), &[0.3, 0.2]);
        assert_eq!(d.ab(1).row(0), &[0.1, 0.4]);
        assert_eq!(d.total_order_cost(), 3);
    }

    #[test]
    fn empty_base_keeps_dimension() {
        let d = build_ab(&SampleMatrix::empty(6)).unwrap();
        assert_eq!((d.n(), d.k()), (0, 3));
    }

    #[test]
    fn odd_base_is_rejected() {
        let base = SampleMatrix::new(1, 3, vec![0.1, 0.2, 0.3]).unwrap();
        assert_eq!(build_ab(&base).unwrap_err(), SamplingError::OddColumnCount(3));
    }

    #[test]
    fn star_point_counts_follow_cost_formula() {
        let centers = crate::sampling::random_points(2, 3, 1);
        assert_eq!(build_stars(&centers, 0.1).unwrap().len(), 56);
        let one = crate::sampling::random_points(1, 3, 1);
        assert_eq!(build_stars(&one, 0.2).unwrap().len(), 13);
    }

    #[test]
    fn anchored_grid_contains_center() {
        let centers = SampleMatrix::new(1, 1, vec![0.537]).unwrap();
        let d = build_stars(&centers, 0.1).unwrap();
        let grid = d.section_grid(0, 0);
        assert_eq!(grid.len(), 10);
        assert!((grid[0] - 0.037).abs() < 1e-12);
        assert!((grid[9] - 0.937).abs() < 1e-12);
        assert_eq!(grid[d.center_slot(0, 0)], 0.537);
        for w in grid.windows(2) {
            assert!((w[1] - w[0] - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_spacing_is_rejected() {
        let centers = crate::sampling::random_points(1, 2, 1);
        for h in [0.3, 0.0, -0.1, 0.7, 0.15] {
            assert_eq!(
                build_stars(&centers, h).unwrap_err(),
                SamplingError::InvalidSpacing(h)
            );
        }
        for h in [0.01, 0.02, 0.05, 0.1, 0.2] {
            assert!(build_stars(&centers, h).is_ok());
        }
    }

    #[test]
    fn sections_vary_only_their_own_coordinate() {
        let centers = crate::sampling::random_points(3, 4, 9);
        let d = build_stars(&centers, 0.2).unwrap();
        let pts = d.points();
        for v in 0..3 {
            for i in 0..4 {
                let sec = d.section(v, i);
                assert_eq!(sec.len(), 5);
                assert!(sec.contains(&(v * d.per_star())));
                for (j, &p) in sec.iter().enumerate() {
                    for c in 0..4 {
                        let expect = if c == i {
                            d.section_grid(v, i)[j]
                        } else {
                            centers.get(v, c)
                        };
                        assert_eq!(pts.get(p, c), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn streaming_evaluation_matches_materialized_points() {
        let centers = crate::sampling::random_points(2, 3, 4);
        let d = build_stars(&centers, 0.25).unwrap();
        let f = |x: &[f64]| x[0] + 2.0 * x[1] * x[2];
        let streamed = d.evaluate(|_, u| u, f);
        let direct: Vec<f64> = d.points().iter_rows().map(f).collect();
        assert_eq!(streamed, direct);

        let base = crate::sampling::random_points(5, 6, 2);
        let ab = build_ab(&base).unwrap();
        let out = ab.evaluate(|_, u| u, |x: &[f64]| x[0] * x[1] - x[2], true);
        for i in 0..3 {
            let direct: Vec<f64> = ab.ab(i).iter_rows().map(|x| x[0] * x[1] - x[2]).collect();
            assert_eq!(out.y_ab[i], direct);
        }
        assert_eq!(out.y_b.unwrap().len(), 5);
    }
}
