//! k-tensors: multilinear maps `V^k -> R` stored as sparse maps over
//! unconstrained multi-indices, `S = sum a_{i1..ik} phi_{i1} (x) ... (x) phi_{ik}`.

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linalg::PointFrame;
use crate::perm::signed_permutations;
use crate::scalar::Scalar;
use crate::sparse::SparseMap;

/// Largest arity accepted by [`KTensor::alt`]; it enumerates all `k!`
/// permutations.
pub const MAX_ALT_ARITY: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct KTensor<T> {
    body: SparseMap<T>,
}

impl<T: Scalar> KTensor<T> {
    pub fn zero(arity: usize) -> Self {
        Self { body: SparseMap::new(arity) }
    }

    pub fn from_map(body: SparseMap<T>) -> Self {
        Self { body }
    }

    /// One term per row; duplicate rows accumulate.
    pub fn from_rows(rows: &[Vec<usize>], coeffs: &[T]) -> Result<Self> {
        let first = rows.first().ok_or_else(|| Error::InvalidArgument("no rows given".into()))?;
        if rows.len() != coeffs.len() {
            return Err(Error::LengthMismatch { expected: rows.len(), found: coeffs.len() });
        }
        let arity = first.len();
        let mut body = SparseMap::new(arity);
        for (row, &c) in rows.iter().zip(coeffs) {
            if row.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: row.len() });
            }
            body.insert_accumulate(MultiIndex::new(row.clone())?, c)?;
        }
        Ok(Self { body })
    }

    pub fn arity(&self) -> usize {
        self.body.arity()
    }

    pub fn dimension(&self) -> usize {
        self.body.dimension()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_empty()
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn coeff(&self, key: &MultiIndex) -> T {
        self.body.get(key)
    }

    pub fn terms(&self) -> crate::sparse::Iter<'_, T> {
        self.body.iter()
    }

    pub fn as_map(&self) -> &SparseMap<T> {
        &self.body
    }

    pub fn into_map(self) -> SparseMap<T> {
        self.body
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { body: self.body.add(&other.body)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { body: self.body.sub(&other.body)? })
    }

    pub fn scale(&self, s: T) -> Self {
        Self { body: self.body.scale(s) }
    }

    pub fn zap(&self, tol: T) -> Self {
        Self { body: self.body.zap(tol) }
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.body.approx_eq(&other.body, tol)
    }

    /// `sum coeff * prod_j E[i_j, j]`, summed in key order. Rows of `frame`
    /// beyond the tensor's dimension are ignored.
    pub fn evaluate(&self, frame: &PointFrame<T>) -> Result<T> {
        check_frame(self.arity(), self.dimension(), frame)?;
        let mut total = T::zero();
        for (key, c) in self.terms() {
            let mut prod = c;
            for (j, i) in key.iter().enumerate() {
                prod *= frame[(i - 1, j)];
            }
            total += prod;
        }
        Ok(total)
    }

    /// `S (x) T`: keys concatenate, coefficients multiply.
    pub fn tensor_product(&self, other: &Self) -> Self {
        let mut body = SparseMap::new(self.arity() + other.arity());
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                body.insert_accumulate(a.concat(b), ca * cb).expect("arity k + l");
            }
        }
        Self { body }
    }

    /// `Alt(T)(v_1..v_k) = 1/k! sum_sigma sgn(sigma) T(v_sigma(1)..v_sigma(k))`.
    ///
    /// Each term `c phi_I` contributes `sgn(sigma) c / k!` at every
    /// permuted key. Arity 0 is the identity.
    pub fn alt(&self) -> Result<Self> {
        let k = self.arity();
        if k > MAX_ALT_ARITY {
            return Err(Error::Cost(format!("Alt enumerates {k}! permutations; arity is limited to {MAX_ALT_ARITY}")));
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let perms = signed_permutations(k);
        let inv_factorial = T::one() / T::from_count((1..=k).product());
        let mut body = SparseMap::new(k);
        for (key, c) in self.terms() {
            let base = c * inv_factorial;
            let idx = key.as_slice();
            for (p, s) in &perms {
                // value of T(v_sigma(1), ..) puts index idx[j] on slot sigma(j),
                // i.e. the permuted key has idx[j] at position p[j]
                let mut permuted = vec![0; k];
                for (j, &pj) in p.iter().enumerate() {
                    permuted[pj] = idx[j];
                }
                body.insert_accumulate(MultiIndex::from_vec_unchecked(permuted), s.apply(base))?;
            }
        }
        Ok(Self { body })
    }
}

pub(crate) fn check_frame<T: Scalar>(arity: usize, dimension: usize, frame: &PointFrame<T>) -> Result<()> {
    if frame.cols() != arity {
        return Err(Error::Dimension(format!(
            "frame has {} columns but the map takes {} arguments",
            frame.cols(),
            arity
        )));
    }
    if frame.rows() < dimension {
        return Err(Error::Dimension(format!(
            "frame has {} rows but the map needs dimension {}",
            frame.rows(),
            dimension
        )));
    }
    Ok(())
}
