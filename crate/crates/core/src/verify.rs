//! Seeded randomized checks of the algebraic identities, aggregated into a
//! single report. Every check draws its cases from one [`SplitMix64`]
//! stream so a seed reproduces the whole run.

use serde::Serialize;

use crate::derivative::{dd_check, demo, hat, omega_gradient};
use crate::error::Result;
use crate::form::{binomial, KForm};
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::rng::{rform, SplitMix64};
use crate::sparse::SparseMap;
use crate::stokes::{verify_det_proportionality, verify_stokes, DEFAULT_ORDER};
use crate::tensor::KTensor;

/// Outcome of one named check over many cases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest error seen, in the units the tolerance is stated in.
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, cases: 0, failures: 0, worst: 0.0, tolerance }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        if err.is_nan() || err > self.tolerance {
            self.failures += 1;
        }
        if err.is_nan() || err > self.worst {
            self.worst = err;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

/// `|a - b| / max(1, |a|, |b|)`
fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Largest termwise difference.
fn term_err(a: &SparseMap<f64>, b: &SparseMap<f64>) -> f64 {
    match a.sub(b) {
        Ok(d) => d.max_abs(),
        Err(_) => f64::INFINITY,
    }
}

fn random_form(rng: &mut SplitMix64, k: usize, n: usize) -> Result<KForm<f64>> {
    let available = binomial(n, k).min(6) as u64;
    let terms = 1 + rng.below(available) as usize;
    rform(rng.next_u64(), k, n, terms)
}

/// Random tensor with arbitrary (not necessarily increasing) keys.
fn random_tensor(rng: &mut SplitMix64, k: usize, n: usize) -> Result<KTensor<f64>> {
    let terms = 1 + rng.below(6) as usize;
    let rows: Vec<Vec<usize>> =
        (0..terms).map(|_| (0..k).map(|_| 1 + rng.below(n as u64) as usize).collect()).collect();
    let coeffs: Vec<f64> = (0..terms).map(|_| rng.small_nonzero() as f64).collect();
    KTensor::from_rows(&rows, &coeffs)
}

/// `(k, n)` with `1 <= k <= 3`, `k <= n <= 8`.
fn random_shape(rng: &mut SplitMix64) -> (usize, usize) {
    let k = 1 + rng.below(3) as usize;
    let n = k + rng.below((9 - k) as u64) as usize;
    (k, n)
}

fn check_multilinearity(rng: &mut SplitMix64, cases: usize) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("multilinearity", 1e-10);
    for _ in 0..cases {
        let (k, n) = random_shape(rng);
        let form = random_form(rng, k, n)?;
        let tensor = random_tensor(rng, k, n)?;
        let mut frame = rng.normal_matrix::<f64>(n, k);
        let slot = rng.below(k as u64) as usize;
        let u = rng.normal_vec::<f64>(n);
        let v = rng.normal_vec::<f64>(n);
        let (alpha, beta) = (rng.normal(), rng.normal());
        let mixed: Vec<f64> = u.iter().zip(&v).map(|(a, b)| alpha * a + beta * b).collect();
        let mut err = 0f64;
        for eval in
            [&(|e: &Matrix<f64>| form.evaluate(e)) as &dyn Fn(&Matrix<f64>) -> Result<f64>, &|e: &Matrix<f64>| {
                tensor.evaluate(e)
            }]
        {
            frame.set_column(slot, &mixed);
            let lhs = eval(&frame)?;
            frame.set_column(slot, &u);
            let at_u = eval(&frame)?;
            frame.set_column(slot, &v);
            let at_v = eval(&frame)?;
            let rhs = alpha * at_u + beta * at_v;
            let scale = 1f64.max((alpha * at_u).abs() + (beta * at_v).abs());
            err = err.max((lhs - rhs).abs() / scale);
        }
        out.record(err);
    }
    Ok(out)
}

fn check_alternation(rng: &mut SplitMix64, cases: usize) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("alternation", 1e-10);
    let mut done = 0;
    while done < cases {
        let (k, n) = random_shape(rng);
        if k < 2 {
            continue;
        }
        let form = random_form(rng, k, n)?;
        let alt = random_tensor(rng, k, n)?.alt()?;
        let frame = rng.normal_matrix::<f64>(n, k);
        let i = rng.below(k as u64) as usize;
        let j = (i + 1 + rng.below(k as u64 - 1) as usize) % k;
        let mut swapped = frame.clone();
        swapped.swap_columns(i, j);
        let e1 = rel_err(form.evaluate(&frame)?, -form.evaluate(&swapped)?);
        let e2 = rel_err(alt.evaluate(&frame)?, -alt.evaluate(&swapped)?);
        out.record(e1.max(e2));
        done += 1;
    }
    Ok(out)
}

fn check_alt_idempotence(rng: &mut SplitMix64, cases: usize) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("alt_idempotence", 1e-12);
    for _ in 0..cases {
        let (k, n) = random_shape(rng);
        let expanded = random_form(rng, k, n)?.expand()?;
        let e1 = term_err(expanded.alt()?.as_map(), expanded.as_map());
        let once = random_tensor(rng, k, n)?.alt()?;
        let e2 = term_err(once.alt()?.as_map(), once.as_map());
        out.record(e1.max(e2));
    }
    Ok(out)
}

fn check_wedge_algebra(rng: &mut SplitMix64, cases: usize) -> Result<Vec<CheckOutcome>> {
    let mut assoc = CheckOutcome::new("wedge_associativity", 1e-12);
    let mut distrib = CheckOutcome::new("wedge_distributivity", 1e-12);
    let mut anti = CheckOutcome::new("wedge_graded_anticommutativity", 1e-12);
    for _ in 0..cases {
        let n = 1 + rng.below(8) as usize;
        let pick = |rng: &mut SplitMix64| -> Result<KForm<f64>> {
            let k = rng.below(n.min(3) as u64 + 1) as usize;
            random_form(rng, k, n)
        };
        let (a, b, c) = (pick(rng)?, pick(rng)?, pick(rng)?);
        let left = a.wedge(&b).wedge(&c);
        let right = a.wedge(&b.wedge(&c));
        // relative to the size of the integer coefficients involved
        let scale = 1f64.max(left.max_abs());
        assoc.record(term_err(left.as_map(), right.as_map()) / scale);

        let c_same = random_form(rng, b.arity(), n)?;
        let lhs = a.wedge(&b.add(&c_same)?);
        let rhs = a.wedge(&b).add(&a.wedge(&c_same))?;
        distrib.record(term_err(lhs.as_map(), rhs.as_map()) / 1f64.max(lhs.max_abs()));

        let sign = if (a.arity() * b.arity()) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = a.wedge(&b);
        let ba = b.wedge(&a).scale(sign);
        anti.record(term_err(ab.as_map(), ba.as_map()) / 1f64.max(ab.max_abs()));
    }
    Ok(vec![assoc, distrib, anti])
}

fn check_fast_vs_definitional_wedge(rng: &mut SplitMix64, cases: usize) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("fast_wedge_matches_definition", 1e-10);
    for _ in 0..cases {
        let n = 1 + rng.below(5) as usize;
        let k = 1 + rng.below(n.min(3) as u64) as usize;
        let l = 1 + rng.below((4 - k).min(n) as u64) as usize;
        let a = random_form(rng, k, n)?;
        let b = random_form(rng, l, n)?;
        let fast = a.wedge(&b).expand()?;
        let definitional = a.expand()?.tensor_product(&b.expand()?).alt()?.scale(binomial(k + l, k) as f64);
        out.record(term_err(fast.as_map(), definitional.as_map()));
    }
    Ok(out)
}

fn check_contraction(rng: &mut SplitMix64, cases: usize) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("contraction_matches_evaluation", 1e-10);
    for _ in 0..cases {
        let (k, n) = random_shape(rng);
        let form = random_form(rng, k, n)?;
        let frame = rng.normal_matrix::<f64>(n, k);
        let full = form.evaluate(&frame)?;
        let first = form.contract(frame.column(0))?.evaluate(&frame.drop_leading_columns(1))?;
        let all = form.contract_matrix(&frame, true)?.value().unwrap_or(f64::NAN);
        out.record(rel_err(full, first).max(rel_err(full, all)));
    }
    Ok(out)
}

fn check_det_proportionality(rng: &mut SplitMix64, cases: usize) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("det_proportionality", 1e-8);
    for _ in 0..cases {
        let n = 1 + rng.below(8) as usize;
        let key: Vec<usize> = (1..=n).collect();
        let omega = KForm::from_rows(&[key], &[rng.small_nonzero() as f64])?;
        let frame = rng.normal_matrix::<f64>(n, n);
        let r = verify_det_proportionality(&omega, &frame)?;
        out.record(r.diff.abs() / 1f64.max(r.lhs.abs()));
    }
    Ok(out)
}

fn check_dd_zero(rng: &mut SplitMix64, cases: usize) -> Result<Vec<CheckOutcome>> {
    let mut numeric = CheckOutcome::new("dd_zero_fd_hessian", 1e-4);
    let mut analytic = CheckOutcome::new("dd_zero_analytic_hessian", 1e-12);
    let fields = [demo::f1::<f64>(), demo::f2(), demo::f3()];
    let fd_fields: Vec<_> = fields.iter().map(|f| f.numeric_only()).collect();
    let wedges = demo::phi_wedges().map(|w| MultiIndex::new(w.to_vec()).expect("valid wedge"));
    let mut points = vec![demo::point::<f64>().to_vec()];
    points.extend((1..cases).map(|_| (0..4).map(|_| rng.uniform(0.5, 2.0)).collect()));
    for x in &points {
        numeric.record(dd_check(&fd_fields, &wedges, x)?.max_abs());
        analytic.record(dd_check(&fields, &wedges, x)?.max_abs());
    }
    Ok(vec![numeric, analytic])
}

fn check_omega_closed(rng: &mut SplitMix64, cases: usize) -> Result<CheckOutcome> {
    // error reported relative to the stated bound, so the tolerance is 1
    let mut out = CheckOutcome::new("omega_closed", 1.0);
    for _ in 0..cases {
        let n = 3 + rng.below(7) as usize;
        let x: Vec<f64> = rng.normal_vec(n);
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        let bound = 1e-12 * (1.0 + norm2.powi(-(n as i32)));
        let top = omega_gradient(&x)?.wedge(&hat(n)?);
        out.record(top.max_abs() / bound);
    }
    Ok(out)
}

fn check_stokes() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("stokes", 1e-8);
    for (n, a) in [(2, 1.0), (3, 1.0), (4, 1.0), (3, 0.5)] {
        out.record(verify_stokes(n, a, DEFAULT_ORDER)?.max_relative_error());
    }
    Ok(out)
}

/// Runs every check with `cases` random cases each.
pub fn run_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut rng = SplitMix64::new(seed);
    let mut checks = vec![
        check_multilinearity(&mut rng, cases)?,
        check_alternation(&mut rng, cases)?,
        check_alt_idempotence(&mut rng, cases)?,
    ];
    checks.extend(check_wedge_algebra(&mut rng, cases)?);
    checks.push(check_fast_vs_definitional_wedge(&mut rng, cases)?);
    checks.push(check_contraction(&mut rng, cases)?);
    checks.push(check_det_proportionality(&mut rng, cases)?);
    checks.extend(check_dd_zero(&mut rng, cases.min(10))?);
    checks.push(check_omega_closed(&mut rng, cases)?);
    checks.push(check_stokes()?);
    let passed = checks.iter().all(CheckOutcome::passed);
    Ok(SuiteReport { seed, passed, checks })
}
