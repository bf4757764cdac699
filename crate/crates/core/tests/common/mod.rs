//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls the library's determinant, permutation, wedge, `Alt`
//! or evaluation code: permutations are enumerated recursively, signs come
//! from inversion counts, determinants from the Leibniz sum, and tensors are
//! plain `BTreeMap`s.

#![allow(dead_code)]

use std::collections::BTreeMap;

use exterior_core::{KForm64, KTensor64, Matrix64, SplitMix64};

pub type Dense = BTreeMap<Vec<usize>, f64>;

/// `(-1)^(number of inversions)`.
pub fn inversion_sign(p: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// All permutations of `0..k`, each with its sign.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out.into_iter()
        .map(|p| {
            let s = inversion_sign(&p);
            (p, s)
        })
        .collect()
}

/// Leibniz determinant of a square row-major matrix.
pub fn leibniz_det(m: &[Vec<f64>]) -> f64 {
    let k = m.len();
    permutations(k).iter().map(|(p, s)| s * (0..k).map(|i| m[i][p[i]]).product::<f64>()).sum()
}

pub fn matrix_rows(m: &Matrix64) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

/// `sum c * det(E[key, :])` with Leibniz minors.
pub fn eval_form(form: &KForm64, frame: &Matrix64) -> f64 {
    let rows = matrix_rows(frame);
    form.terms()
        .map(|(key, c)| {
            let minor: Vec<Vec<f64>> = key.iter().map(|i| rows[i - 1].clone()).collect();
            c * leibniz_det(&minor)
        })
        .sum()
}

/// `sum c * prod_j E[i_j, j]`.
pub fn eval_dense(t: &Dense, frame: &Matrix64) -> f64 {
    t.iter().map(|(key, c)| c * key.iter().enumerate().map(|(j, &i)| frame[(i - 1, j)]).product::<f64>()).sum()
}

fn accumulate(out: &mut Dense, key: Vec<usize>, c: f64) {
    *out.entry(key).or_insert(0.0) += c;
}

fn prune(mut d: Dense) -> Dense {
    d.retain(|_, c| *c != 0.0);
    d
}

pub fn dense_of_form(form: &KForm64) -> Dense {
    form.terms().map(|(k, c)| (k.as_slice().to_vec(), c)).collect()
}

pub fn dense_of_tensor(t: &KTensor64) -> Dense {
    t.terms().map(|(k, c)| (k.as_slice().to_vec(), c)).collect()
}

/// Each `c dx_I` becomes `sum_sigma sgn(sigma) c e_{I o sigma}`.
pub fn expand(form: &KForm64) -> Dense {
    let perms = permutations(form.arity());
    let mut out = Dense::new();
    for (key, c) in form.terms() {
        let idx = key.as_slice();
        for (p, s) in &perms {
            accumulate(&mut out, p.iter().map(|&j| idx[j]).collect(), s * c);
        }
    }
    prune(out)
}

pub fn tensor_product(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let mut key = ka.clone();
            key.extend(kb);
            accumulate(&mut out, key, ca * cb);
        }
    }
    prune(out)
}

/// `Alt(T)(v_1..v_k) = 1/k! sum_sigma sgn(sigma) T(v_sigma(1)..v_sigma(k))`,
/// written out on coefficients.
pub fn alt(t: &Dense, k: usize) -> Dense {
    let perms = permutations(k);
    let fact = perms.len() as f64;
    let mut out = Dense::new();
    for (key, c) in t {
        for (p, s) in &perms {
            let mut permuted = vec![0; k];
            for j in 0..k {
                permuted[p[j]] = key[j];
            }
            accumulate(&mut out, permuted, s * c / fact);
        }
    }
    out
}

pub fn scale(t: &Dense, s: f64) -> Dense {
    t.iter().map(|(k, c)| (k.clone(), c * s)).collect()
}

/// Largest termwise difference.
pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    let mut worst = 0f64;
    for (k, c) in a {
        worst = worst.max((c - b.get(k).copied().unwrap_or(0.0)).abs());
    }
    for (k, c) in b {
        if !a.contains_key(k) {
            worst = worst.max(c.abs());
        }
    }
    worst
}

pub fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Random form with up to `max_terms` terms, distinct increasing keys in
/// `1..=n`, small integer coefficients.
pub fn random_form(rng: &mut SplitMix64, k: usize, n: usize, max_terms: usize) -> KForm64 {
    let terms = 1 + rng.below(max_terms as u64) as usize;
    let mut rows = Vec::new();
    let mut coeffs = Vec::new();
    for _ in 0..terms {
        let mut key: Vec<usize> = Vec::new();
        while key.len() < k {
            let i = 1 + rng.below(n as u64) as usize;
            if !key.contains(&i) {
                key.push(i);
            }
        }
        key.sort_unstable();
        rows.push(key);
        coeffs.push(rng.small_nonzero() as f64);
    }
    KForm64::from_rows(&rows, &coeffs).unwrap()
}

/// Random tensor with unrestricted keys.
pub fn random_tensor(rng: &mut SplitMix64, k: usize, n: usize, max_terms: usize) -> KTensor64 {
    let terms = 1 + rng.below(max_terms as u64) as usize;
    let rows: Vec<Vec<usize>> =
        (0..terms).map(|_| (0..k).map(|_| 1 + rng.below(n as u64) as usize).collect()).collect();
    let coeffs: Vec<f64> = (0..terms).map(|_| rng.small_nonzero() as f64).collect();
    KTensor64::from_rows(&rows, &coeffs).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}
