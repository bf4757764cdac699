use std::fmt;

use crate::error::{Error, Result};

/// 1-based multi-index `(i1, ..., ik)` addressing one basis tensor product
/// or elementary wedge. The empty index is the key of a 0-form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: impl Into<Vec<usize>>) -> Result<Self> {
        let indices = indices.into();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0) {
            return Err(Error::InvalidIndex(bad));
        }
        Ok(Self(indices))
    }

    /// The arity-0 key.
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Caller guarantees every entry is >= 1.
    pub(crate) fn from_vec_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(indices.iter().all(|&i| i >= 1));
        Self(indices)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn has_repeats(&self) -> bool {
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// Copy with the entry at 0-based `position` removed.
    pub fn without(&self, position: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(position);
        MultiIndex(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for MultiIndex {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        MultiIndex::new(v)
    }
}

impl TryFrom<&[usize]> for MultiIndex {
    type Error = Error;

    fn try_from(v: &[usize]) -> Result<Self> {
        MultiIndex::new(v.to_vec())
    }
}

impl<const N: usize> TryFrom<[usize; N]> for MultiIndex {
    type Error = Error;

    fn try_from(v: [usize; N]) -> Result<Self> {
        MultiIndex::new(v.to_vec())
    }
}
