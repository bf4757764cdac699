//! Seeded pseudo-random generation of forms, vectors and frames.
//!
//! Everything here is driven by [`SplitMix64`] so that results are
//! reproducible across platforms and implementations:
//!
//! * `next_u64`: `state += 0x9E3779B97F4A7C15`, then the standard SplitMix64
//!   finalizer (`xor-shift 30, * 0xBF58476D1CE4E5B9, xor-shift 27,
//!   * 0x94D049BB133111EB, xor-shift 31`).
//! * `below(n)`: `next_u64() % n`.
//! * `next_f64`: top 53 bits of `next_u64` scaled by `2^-53`, uniform on `[0, 1)`.
//! * `normal`: Box-Muller on two `next_f64` draws, cosine branch only.
//!
//! [`rform`] enumerates the `C(n, k)` increasing keys over `1..=n` in
//! lexicographic order, picks `terms` of them by a partial Fisher-Yates
//! shuffle (for `i` in `0..terms`: swap slot `i` with slot
//! `i + below(C - i)`), and then draws one coefficient per chosen key, in
//! shuffle order, as `v = below(24)`, coefficient `v - 12` if `v < 12`,
//! else `v - 11` (uniform on `[-12, 12] \ {0}`).

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::form::{binomial, KForm};
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::sparse::SparseMap;

/// Largest `C(n, k)` that [`rform`] will enumerate.
pub const MAX_RFORM_KEYS: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        self.next_u64() % n
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal deviate.
    pub fn normal(&mut self) -> f64 {
        // 1 - u keeps the logarithm finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn normal_vec<T: Scalar>(&mut self, n: usize) -> Vec<T> {
        (0..n).map(|_| T::lit(self.normal())).collect()
    }

    /// `rows x cols` matrix of standard normal entries.
    pub fn normal_matrix<T: Scalar>(&mut self, rows: usize, cols: usize) -> Matrix<T> {
        let mut m = Matrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = T::lit(self.normal());
            }
        }
        m
    }

    /// Uniform integer in `[-12, 12]` excluding 0.
    pub fn small_nonzero(&mut self) -> i64 {
        let v = self.below(24) as i64;
        if v < 12 {
            v - 12
        } else {
            v - 11
        }
    }
}

/// Reproducible random `k`-form on `R^n` with `terms` distinct terms and
/// integer coefficients in `[-12, 12] \ {0}`.
pub fn rform<T: Scalar>(seed: u64, k: usize, n: usize, terms: usize) -> Result<KForm<T>> {
    let available = binomial(n, k);
    if terms as u128 > available {
        return Err(Error::InvalidArgument(format!(
            "{terms} terms requested but only C({n}, {k}) = {available} keys exist"
        )));
    }
    if terms == 0 {
        return Ok(KForm::zero(k));
    }
    if available > MAX_RFORM_KEYS {
        return Err(Error::Cost(format!("rform would enumerate C({n}, {k}) = {available} keys")));
    }
    let mut keys: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
    let mut rng = SplitMix64::new(seed);
    let total = keys.len();
    for i in 0..terms {
        let j = i + rng.below((total - i) as u64) as usize;
        keys.swap(i, j);
    }
    let mut body = SparseMap::new(k);
    for key in keys.into_iter().take(terms) {
        let c = rng.small_nonzero();
        body.insert_accumulate(MultiIndex::new(key)?, T::lit(c as f64))?;
    }
    Ok(KForm::from_map(&body))
}
