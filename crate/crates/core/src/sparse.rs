//! Sparse coefficient store keyed by multi-indices.
//!
//! A [`SparseMap`] holds a finite map from [`MultiIndex`] keys of a common
//! arity to nonzero coefficients. It underlies both [`KTensor`] and
//! [`KForm`]. Keys are kept in a `BTreeMap`, so iteration (and therefore
//! printing and summation) is lexicographic and independent of insertion
//! order. A coefficient that becomes exactly zero is removed.
//!
//! [`KTensor`]: crate::tensor::KTensor
//! [`KForm`]: crate::form::KForm

use std::collections::btree_map::{self, BTreeMap};

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;

/// Default threshold for [`SparseMap::zap`].
pub const DEFAULT_ZAP_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMap<T> {
    arity: usize,
    terms: BTreeMap<MultiIndex, T>,
}

impl<T: Scalar> SparseMap<T> {
    /// The zero map of the given arity.
    pub fn new(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    /// Builds a map by accumulating `(key, coefficient)` pairs.
    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, T)>,
    {
        let mut map = Self::new(arity);
        for (key, c) in terms {
            map.insert_accumulate(key, c)?;
        }
        Ok(map)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest index appearing in any key; 0 for the empty map.
    pub fn dimension(&self) -> usize {
        self.terms.keys().map(MultiIndex::max_index).max().unwrap_or(0)
    }

    pub fn get(&self, key: &MultiIndex) -> T {
        self.terms.get(key).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> Iter<'_, T> {
        Iter { inner: self.terms.iter() }
    }

    pub fn keys(&self) -> impl Iterator<Item = &MultiIndex> {
        self.terms.keys()
    }

    /// Adds `c` to the coefficient at `key`, dropping the key if the sum is
    /// exactly zero.
    pub fn insert_accumulate(&mut self, key: MultiIndex, c: T) -> Result<()> {
        if key.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: key.arity() });
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            btree_map::Entry::Occupied(mut slot) => {
                let sum = *slot.get() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// Termwise sum. An empty operand is the zero map of any arity.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            if other.is_empty() {
                return Ok(self.clone());
            }
            if self.is_empty() {
                return Ok(other.clone());
            }
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let mut out = self.clone();
        for (key, c) in other.iter() {
            out.insert_accumulate(key.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, s: T) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, &c)| {
                let v = c * s;
                (!v.is_zero()).then(|| (k.clone(), v))
            })
            .collect();
        Self { arity: self.arity, terms }
    }

    /// Removes every term with `|coefficient| <= tol`.
    pub fn zap(&self, tol: T) -> Self {
        let terms = self.terms.iter().filter(|(_, c)| c.abs() > tol).map(|(k, &c)| (k.clone(), c)).collect();
        Self { arity: self.arity, terms }
    }

    /// True when the arities agree (or either side is empty) and every
    /// coefficient of `self - other` has magnitude at most `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        match self.sub(other) {
            Ok(diff) => diff.zap(tol).is_empty(),
            Err(_) => false,
        }
    }

    /// Largest coefficient magnitude; 0 for the empty map.
    pub fn max_abs(&self) -> T {
        self.terms.values().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    /// Maps every key through `f`, accumulating collisions. Used by the
    /// canonicalizing constructors.
    pub(crate) fn map_terms<F>(&self, arity: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&MultiIndex, T) -> Option<(MultiIndex, T)>,
    {
        let mut out = Self::new(arity);
        for (key, c) in self.iter() {
            if let Some((k, v)) = f(key, c) {
                out.insert_accumulate(k, v)?;
            }
        }
        Ok(out)
    }
}

pub struct Iter<'a, T> {
    inner: btree_map::Iter<'a, MultiIndex, T>,
}

impl<'a, T: Copy> Iterator for Iter<'a, T> {
    type Item = (&'a MultiIndex, T);

    fn next(&mut self) -> Option<Self::Item> {
        self.inner.next().map(|(k, &c)| (k, c))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.inner.size_hint()
    }
}

impl<'a, T: Scalar> IntoIterator for &'a SparseMap<T> {
    type Item = (&'a MultiIndex, T);
    type IntoIter = Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}
