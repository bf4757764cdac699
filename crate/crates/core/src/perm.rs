//! Permutation parity and sign-tracking canonicalization of index tuples.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Sign {
    #[default]
    Pos,
    Neg,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Sign::Pos => x,
            Sign::Neg => -x,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

/// Sign of a permutation of `1..=k`, given as its image sequence.
pub fn perm_sign(p: &[usize]) -> Result<Sign> {
    let k = p.len();
    let mut seen = vec![false; k];
    for &x in p {
        if x == 0 || x > k || seen[x - 1] {
            return Err(Error::NotPermutation(k));
        }
        seen[x - 1] = true;
    }
    // parity = k - (number of cycles)
    let mut visited = vec![false; k];
    let mut cycles = 0;
    for start in 0..k {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !visited[j] {
            visited[j] = true;
            j = p[j] - 1;
        }
    }
    Ok(Sign::from_parity((k - cycles) % 2 == 1))
}

/// Sorts `indices` ascending and returns the sign of the sorting
/// permutation, or `None` if an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, Sign)> {
    let mut v = indices.to_vec();
    let mut odd = false;
    // insertion sort; tuples are short
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
        if j < i && v[j + 1] == v[j] {
            return None;
        }
    }
    Some((v, Sign::from_parity(odd)))
}

/// Merges two strictly increasing tuples. The sign is that of the
/// permutation taking the concatenation `(a, b)` to sorted order, i.e. the
/// parity of the number of pairs `(x in a, y in b)` with `x > y`.
/// Returns `None` when the tuples share an index.
pub fn merge_with_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, Sign)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] passes every remaining element of a
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, Sign::from_parity(inversions % 2 == 1)))
}

/// All permutations of `0..k` with their signs, in lexicographic order.
pub(crate) fn signed_permutations(k: usize) -> Vec<(Vec<usize>, Sign)> {
    use itertools::Itertools;
    (0..k)
        .permutations(k)
        .map(|p| {
            let one_based: Vec<usize> = p.iter().map(|&x| x + 1).collect();
            let s = perm_sign(&one_based).expect("generated permutation");
            (p, s)
        })
        .collect()
}
