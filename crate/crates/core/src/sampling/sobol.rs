//! Sobol' low-discrepancy sequence.
//!
//! Points are produced in binary-counter order, `x_n = XOR_{j in bits(n)} v_j`,
//! with the all-zeros point `x_0` skipped. Because `x_{2^m}` has its first `m`
//! binary digits equal to zero, every prefix of length `2^m` keeps the
//! dyadic stratification of the full net even after the skip.
//!
//! Direction numbers come from the Joe-Kuo D6 table (1024 dimensions). An
//! optional random digital shift XORs a seeded 32-bit mask into each
//! coordinate; the shift preserves the net structure.

use std::sync::OnceLock;

use rand::Rng;

use super::direction_numbers::JOE_KUO;
use super::{SampleMatrix, SamplingError};

const BITS: usize = 32;
const SCALE: f64 = 1.0 / 4_294_967_296.0;

/// Number of dimensions covered by the direction-number table.
pub const MAX_SOBOL_DIM: usize = 1024;

/// `prefix[dim][c] = v_0 ^ v_1 ^ ... ^ v_c`. Moving from `x_{n-1}` to `x_n`
/// flips exactly the bits `0..=trailing_zeros(n)` of the counter.
fn prefix_directions() -> &'static [[u32; BITS]] {
    static TABLE: OnceLock<Vec<[u32; BITS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(MAX_SOBOL_DIM);
        table.push(prefix_xor(van_der_corput()));
        for &(degree, coeffs, init) in JOE_KUO.iter().take(MAX_SOBOL_DIM - 1) {
            table.push(prefix_xor(directions(degree as usize, coeffs, init)));
        }
        table
    })
}

fn van_der_corput() -> [u32; BITS] {
    let mut v = [0u32; BITS];
    for (c, vc) in v.iter_mut().enumerate() {
        *vc = 1u32 << (31 - c);
    }
    v
}

/// Standard primitive-polynomial recurrence:
/// `v_c = v_{c-s} ^ (v_{c-s} >> s) ^ XOR_{j=1}^{s-1} a_j v_{c-j}`.
fn directions(degree: usize, coeffs: u32, init: &[u32]) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    for c in 0..degree.min(BITS) {
        v[c] = init[c] << (31 - c);
    }
    for c in degree..BITS {
        let mut value = v[c - degree] ^ (v[c - degree] >> degree);
        for j in 1..degree {
            if (coeffs >> (degree - 1 - j)) & 1 == 1 {
                value ^= v[c - j];
            }
        }
        v[c] = value;
    }
    v
}

fn prefix_xor(v: [u32; BITS]) -> [u32; BITS] {
    let mut out = [0u32; BITS];
    let mut acc = 0u32;
    for (o, vc) in out.iter_mut().zip(v) {
        acc ^= vc;
        *o = acc;
    }
    out
}

/// Streaming generator; yields `x_1, x_2, ...`.
#[derive(Debug, Clone)]
pub struct SobolSequence {
    index: u32,
    state: Vec<u32>,
    shift: Vec<u32>,
}

impl SobolSequence {
    pub fn new(dim: usize) -> Result<Self, SamplingError> {
        if dim > MAX_SOBOL_DIM {
            return Err(SamplingError::DimensionExceedsTable {
                requested: dim,
                max: MAX_SOBOL_DIM,
            });
        }
        Ok(Self {
            index: 0,
            state: vec![0; dim],
            shift: vec![0; dim],
        })
    }

    /// Apply a seeded random digital shift to every coordinate.
    pub fn with_digital_shift(mut self, seed: u64) -> Self {
        let mut rng = crate::rng::stream(seed);
        for s in &mut self.shift {
            *s = rng.random();
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.state.len()
    }

    /// Write the next point into `out` (length `dim`).
    pub fn next_into(&mut self, out: &mut [f64]) {
        self.index = self
            .index
            .checked_add(1)
            .expect("Sobol' sequence exhausted at 2^32 - 1 points");
        let c = self.index.trailing_zeros() as usize;
        let table = prefix_directions();
        for (j, ((x, s), o)) in self.state.iter_mut().zip(&self.shift).zip(out).enumerate() {
            *x ^= table[j][c];
            *o = f64::from(*x ^ *s) * SCALE;
        }
    }

    /// The next `n` points as a matrix.
    pub fn take_matrix(&mut self, n: usize) -> SampleMatrix {
        let d = self.dim();
        let mut values = vec![0.0; n * d];
        for row in values.chunks_exact_mut(d.max(1)).take(n) {
            self.next_into(row);
        }
        SampleMatrix::from_parts(n, d, values)
    }
}

/// First `n` Sobol' points in `d` dimensions, optionally digitally shifted.
pub fn sobol_points(
    n: usize,
    d: usize,
    scramble_seed: Option<u64>,
) -> Result<SampleMatrix, SamplingError> {
    let mut seq = SobolSequence::new(d)?;
    if let Some(seed) = scramble_seed {
        seq = seq.with_digital_shift(seed);
    }
    Ok(seq.take_matrix(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_one_dimensional_points() {
        let m = sobol_points(3, 1, None).unwrap();
        let mut got = m.values().to_vec();
        assert_eq!(got, vec![0.5, 0.25, 0.75]);
        got.sort_by(f64::total_cmp);
        assert_eq!(got, vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn direction_recurrence_matches_hand_expansion() {
        // x^2 + x + 1 with m = (1, 3): v_2 = v_0 ^ (v_0 >> 2) ^ v_1
        let v = directions(2, 1, &[1, 3]);
        assert_eq!(v[0], 1 << 31);
        assert_eq!(v[1], 3 << 30);
        assert_eq!(v[2], v[0] ^ (v[0] >> 2) ^ v[1]);
    }

    #[test]
    fn rejects_dimension_beyond_table() {
        assert_eq!(
            sobol_points(4, MAX_SOBOL_DIM + 1, None).unwrap_err(),
            SamplingError::DimensionExceedsTable {
                requested: MAX_SOBOL_DIM + 1,
                max: MAX_SOBOL_DIM
            }
        );
        assert!(sobol_points(4, 111, None).is_ok());
    }

    #[test]
    fn scrambled_output_is_deterministic_and_distinct() {
        let a = sobol_points(4, 2, Some(1)).unwrap();
        assert_eq!(a, sobol_points(4, 2, Some(1)).unwrap());
        assert_ne!(a, sobol_points(4, 2, Some(2)).unwrap());
        assert_ne!(a, sobol_points(4, 2, None).unwrap());
    }
}
