//! Point sets and sampling designs.
//!
//! [`SampleMatrix`] is the row-major carrier for every design in the crate;
//! its values always lie in the half-open unit interval. Designs built on top
//! of it ([`DesignAB`], [`StarDesign`]) stay in unit space, and distribution
//! transforms are applied only when a design is evaluated.

mod design;
mod direction_numbers;
mod sobol;

use rand::Rng;
use thiserror::Error;

pub use design::{build_ab, build_stars, DesignAB, StarDesign};
pub(crate) use design::grid_len_for;
pub use sobol::{sobol_points, SobolSequence, MAX_SOBOL_DIM};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("matrix shape {rows}x{cols} does not match {len} stored values")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("value {value} at ({row}, {col}) is outside [0, 1)")]
    OutOfUnitInterval { row: usize, col: usize, value: f64 },
    #[error("Sobol' dimension {requested} exceeds the direction-number table ({max})")]
    DimensionExceedsTable { requested: usize, max: usize },
    #[error("base matrix has {0} columns; the A/B split needs an even count")]
    OddColumnCount(usize),
    #[error("lag spacing {0} is not the reciprocal of an integer >= 2")]
    InvalidSpacing(f64),
}

/// An `n x d` table of values in `[0, 1)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl SampleMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, SamplingError> {
        if rows * cols != values.len() {
            return Err(SamplingError::ShapeMismatch {
                rows,
                cols,
                len: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !(0.0..1.0).contains(v)) {
            return Err(SamplingError::OutOfUnitInterval {
                row: pos / cols,
                col: pos % cols,
                value: values[pos],
            });
        }
        Ok(Self { rows, cols, values })
    }

    /// Caller guarantees shape and range.
    pub(crate) fn from_parts(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(rows * cols, values.len());
        debug_assert!(values.iter().all(|v| (0.0..1.0).contains(v)));
        Self { rows, cols, values }
    }

    pub fn empty(cols: usize) -> Self {
        Self {
            rows: 0,
            cols,
            values: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact(0) panics, and a zero-column matrix has no data anyway
        self.values.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.iter_rows().map(|r| r[col]).collect()
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols);
        let mut values = Vec::with_capacity(self.rows * (end - start));
        for r in self.iter_rows() {
            values.extend_from_slice(&r[start..end]);
        }
        Self::from_parts(self.rows, end - start, values)
    }

    /// The first `n` rows (or all of them if there are fewer).
    pub fn head(&self, n: usize) -> Self {
        let n = n.min(self.rows);
        Self::from_parts(n, self.cols, self.values[..n * self.cols].to_vec())
    }
}

/// `n x d` i.i.d. uniform values from the seeded ChaCha8 stream.
pub fn random_points(n: usize, d: usize, seed: u64) -> SampleMatrix {
    let mut rng = crate::rng::stream(seed);
    let values = (0..n * d).map(|_| rng.random::<f64>()).collect();
    SampleMatrix::from_parts(n, d, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_points_are_deterministic() {
        assert_eq!(random_points(3, 2, 42), random_points(3, 2, 42));
        assert_ne!(random_points(3, 2, 42), random_points(3, 2, 43));
    }

    #[test]
    fn random_points_mean_within_three_sigma() {
        let m = random_points(10_000, 1, 7);
        let mean = crate::stats::mean(m.values());
        assert!((0.47..=0.53).contains(&mean), "{mean}");
    }

    #[test]
    fn single_random_point_in_range() {
        let m = random_points(1, 1, 0);
        assert_eq!(m.values().len(), 1);
        assert!((0.0..1.0).contains(&m.values()[0]));
    }

    #[test]
    fn constructor_checks_shape_and_range() {
        assert!(matches!(
            SampleMatrix::new(2, 2, vec![0.1; 3]),
            Err(SamplingError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            SampleMatrix::new(1, 2, vec![0.1, 1.0]),
            Err(SamplingError::OutOfUnitInterval { row: 0, col: 1, .. })
        ));
        let m = SampleMatrix::new(2, 3, vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5]).unwrap();
        assert_eq!(m.row(1), &[0.3, 0.4, 0.5]);
        assert_eq!(m.column(2), vec![0.2, 0.5]);
        assert_eq!(m.columns(1, 3).row(0), &[0.1, 0.2]);
        assert_eq!(m.head(1).rows(), 1);
    }
}
