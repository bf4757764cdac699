//! Alternating k-forms `sum_{i1<..<ik} a dx_{i1} ^ .. ^ dx_{ik}`.
//!
//! Every stored key of a [`KForm`] is strictly increasing; constructors that
//! accept arbitrary rows sort them and fold the sorting permutation's sign
//! into the coefficient, dropping rows with a repeated index. Arity 0 is
//! allowed and represents a scalar (0-form) under the empty key.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linalg::{Matrix, PointFrame, PullbackMatrix};
use crate::perm::{merge_with_sign, signed_permutations, sort_with_sign};
use crate::scalar::Scalar;
use crate::sparse::SparseMap;
use crate::tensor::{check_frame, KTensor};

/// Largest number of target subsets [`KForm::pullback`] will enumerate.
pub const MAX_PULLBACK_SUBSETS: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct KForm<T> {
    body: SparseMap<T>,
}

/// Result of [`KForm::contract_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub enum Contraction<T> {
    Scalar(T),
    Form(KForm<T>),
}

impl<T: Scalar> Contraction<T> {
    /// Scalar value of a full contraction, whether or not it was kept as a
    /// 0-form.
    pub fn value(&self) -> Option<T> {
        match self {
            Contraction::Scalar(x) => Some(*x),
            Contraction::Form(f) => f.scalar_value(),
        }
    }
}

impl<T: Scalar> KForm<T> {
    pub fn zero(arity: usize) -> Self {
        Self { body: SparseMap::new(arity) }
    }

    /// The 0-form with value `c`.
    pub fn scalar(c: T) -> Self {
        let mut body = SparseMap::new(0);
        body.insert_accumulate(MultiIndex::empty(), c).expect("arity 0");
        Self { body }
    }

    /// Canonicalizes an arbitrary sparse map: keys are sorted with sign,
    /// keys with repeated indices vanish.
    pub fn from_map(map: &SparseMap<T>) -> Self {
        let body = map
            .map_terms(map.arity(), |key, c| {
                sort_with_sign(key.as_slice()).map(|(sorted, s)| (MultiIndex::from_vec_unchecked(sorted), s.apply(c)))
            })
            .expect("arity preserved");
        Self { body }
    }

    /// Each row is sorted ascending with the coefficient multiplied by the
    /// sign of the sorting permutation; rows with a repeated index are
    /// dropped and duplicates accumulate.
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
            let key = MultiIndex::new(row.clone())?;
            if let Some((sorted, s)) = sort_with_sign(key.as_slice()) {
                body.insert_accumulate(MultiIndex::from_vec_unchecked(sorted), s.apply(c))?;
            }
        }
        Ok(Self { body })
    }

    /// The elementary 1-form `dx_i`.
    pub fn elementary(i: usize) -> Result<Self> {
        let mut body = SparseMap::new(1);
        body.insert_accumulate(MultiIndex::new(vec![i])?, T::one())?;
        Ok(Self { body })
    }

    /// `dx_{i1} ^ .. ^ dx_{ik}` for an arbitrary index tuple (sign-normalized).
    pub fn elementary_wedge(indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Ok(Self::scalar(T::one()));
        }
        Self::from_rows(&[indices.to_vec()], &[T::one()])
    }

    /// General k-form over the given indices: one term per k-subset, with
    /// `coeffs` assigned to subsets in colexicographic order
    /// `(1,2), (1,3), (2,3), (1,4), ...`.
    pub fn general(indices: &[usize], k: usize, coeffs: &[T]) -> Result<Self> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("indices must be distinct".into()));
        }
        if k > idx.len() {
            return Err(Error::InvalidArgument(format!("cannot choose {k} of {} indices", idx.len())));
        }
        let subsets = colex_subsets(&idx, k);
        if subsets.len() != coeffs.len() {
            return Err(Error::LengthMismatch { expected: subsets.len(), found: coeffs.len() });
        }
        let mut body = SparseMap::new(k);
        for (s, &c) in subsets.into_iter().zip(coeffs) {
            body.insert_accumulate(MultiIndex::new(s)?, c)?;
        }
        Ok(Self { body })
    }

    /// The 1-form `sum_i x_i dx_i`.
    pub fn grad(x: &[T]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("grad of an empty vector".into()));
        }
        let mut body = SparseMap::new(1);
        for (i, &c) in x.iter().enumerate() {
            body.insert_accumulate(MultiIndex::from_vec_unchecked(vec![i + 1]), c)?;
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

    /// Value of a 0-form; `None` for higher arity.
    pub fn scalar_value(&self) -> Option<T> {
        (self.arity() == 0).then(|| self.body.get(&MultiIndex::empty()))
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

    pub fn max_abs(&self) -> T {
        self.body.max_abs()
    }

    /// `sum coeff * det(E[key, 1..k])`.
    pub fn evaluate(&self, frame: &PointFrame<T>) -> Result<T> {
        check_frame(self.arity(), self.dimension(), frame)?;
        let cols: Vec<usize> = (0..self.arity()).collect();
        let mut total = T::zero();
        let mut rows = Vec::with_capacity(self.arity());
        for (key, c) in self.terms() {
            rows.clear();
            rows.extend(key.iter().map(|i| i - 1));
            total += c * frame.minor(&rows, &cols);
        }
        Ok(total)
    }

    /// Wedge product by key merge: concatenated keys with a shared index
    /// vanish, the rest are sorted and signed by the inversion count
    /// between the two blocks.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut body = SparseMap::new(self.arity() + other.arity());
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some((merged, s)) = merge_with_sign(a.as_slice(), b.as_slice()) {
                    body.insert_accumulate(MultiIndex::from_vec_unchecked(merged), s.apply(ca * cb))
                        .expect("arity k + l");
                }
            }
        }
        Self { body }
    }

    /// Wedge of a sequence of forms; the empty product is the 0-form 1.
    pub fn wedge_all<'a, I>(forms: I) -> Self
    where
        I: IntoIterator<Item = &'a KForm<T>>,
    {
        forms.into_iter().fold(Self::scalar(T::one()), |acc, f| acc.wedge(f))
    }

    /// Interior product with `v` in the first slot. Term `c dx_I` maps to
    /// `sum_j (-1)^(j-1) v[i_j] c dx_{I without i_j}`.
    pub fn contract(&self, v: &[T]) -> Result<Self> {
        let k = self.arity();
        if k == 0 {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        }
        if v.len() < self.dimension() {
            return Err(Error::Dimension(format!(
                "vector has length {} but the form needs dimension {}",
                v.len(),
                self.dimension()
            )));
        }
        let mut body = SparseMap::new(k - 1);
        for (key, c) in self.terms() {
            for (j, i) in key.iter().enumerate() {
                let term = c * v[i - 1];
                let term = if j % 2 == 0 { term } else { -term };
                body.insert_accumulate(key.without(j), term)?;
            }
        }
        Ok(Self { body })
    }

    /// Repeated contraction with the columns of `vectors`, left to right.
    /// A full contraction yields a scalar when `lose` is set, otherwise the
    /// 0-form.
    pub fn contract_matrix(&self, vectors: &Matrix<T>, lose: bool) -> Result<Contraction<T>> {
        if vectors.cols() > self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: vectors.cols() });
        }
        let mut out = self.clone();
        for j in 0..vectors.cols() {
            out = out.contract(vectors.column(j))?;
        }
        match out.scalar_value() {
            Some(x) if lose => Ok(Contraction::Scalar(x)),
            _ => Ok(Contraction::Form(out)),
        }
    }

    /// Pullback under `dx_i = sum_r M[i, r] dy_r`. Term `a dx_I` maps to
    /// `sum_J a det(M[I, J]) dy_J` over increasing `J`. Small coefficients
    /// are kept; call [`KForm::zap`] to remove them.
    pub fn pullback(&self, m: &PullbackMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("pullback matrix is {}x{}, not square", m.rows(), m.cols())));
        }
        let n = m.rows();
        if n < self.dimension() {
            return Err(Error::Dimension(format!(
                "pullback matrix has dimension {n} but the form needs {}",
                self.dimension()
            )));
        }
        let k = self.arity();
        if k == 0 {
            return Ok(self.clone());
        }
        if binomial(n, k) > MAX_PULLBACK_SUBSETS {
            return Err(Error::Cost(format!("pullback would enumerate C({n}, {k}) minors")));
        }
        let targets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let mut body = SparseMap::new(k);
        let mut rows = Vec::with_capacity(k);
        for (key, a) in self.terms() {
            rows.clear();
            rows.extend(key.iter().map(|i| i - 1));
            for cols in &targets {
                let minor = m.minor(&rows, cols);
                let target = MultiIndex::from_vec_unchecked(cols.iter().map(|c| c + 1).collect());
                body.insert_accumulate(target, a * minor)?;
            }
        }
        Ok(Self { body })
    }

    /// The fully expanded alternating tensor: each term `c dx_I` becomes
    /// `sum_sigma sgn(sigma) c phi_{sigma(I)}`.
    pub fn expand(&self) -> Result<KTensor<T>> {
        let k = self.arity();
        if k > crate::tensor::MAX_ALT_ARITY {
            return Err(Error::Cost(format!("expansion enumerates {k}! permutations")));
        }
        let perms = signed_permutations(k);
        let mut body = SparseMap::new(k);
        for (key, c) in self.terms() {
            let idx = key.as_slice();
            for (p, s) in &perms {
                let permuted: Vec<usize> = p.iter().map(|&j| idx[j]).collect();
                body.insert_accumulate(MultiIndex::from_vec_unchecked(permuted), s.apply(c))?;
            }
        }
        Ok(KTensor::from_map(body))
    }
}

/// `n choose k`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// k-subsets of a sorted list, in colexicographic order.
fn colex_subsets(sorted: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = sorted.iter().copied().combinations(k).collect();
    subsets.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    subsets
}
