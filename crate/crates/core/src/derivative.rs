//! Numeric exterior differentiation.
//!
//! Forms with scalar-field coefficients are differentiated at a point via
//! `d(f dx_I) = df ^ dx_I`, where `df = sum_j D_j f dx_j`. Partial
//! derivatives come from caller-supplied analytic routines when present and
//! from central finite differences otherwise.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::form::KForm;
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

type EvalFn<T> = dyn Fn(&[T]) -> T + Send + Sync;
type GradFn<T> = dyn Fn(&[T]) -> Vec<T> + Send + Sync;
type HessFn<T> = dyn Fn(&[T]) -> Matrix<T> + Send + Sync;

/// A map `R^n -> R` with optional analytic gradient and Hessian.
#[derive(Clone)]
pub struct ScalarField<T> {
    dim: usize,
    eval: Arc<EvalFn<T>>,
    gradient: Option<Arc<GradFn<T>>>,
    hessian: Option<Arc<HessFn<T>>>,
}

impl<T> fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("analytic_gradient", &self.gradient.is_some())
            .field("analytic_hessian", &self.hessian.is_some())
            .finish()
    }
}

impl<T: Scalar> ScalarField<T> {
    /// Field on `R^dim`; the closure may assume `x.len() >= dim`.
    pub fn new(dim: usize, eval: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Self {
        Self { dim, eval: Arc::new(eval), gradient: None, hessian: None }
    }

    pub fn with_gradient(mut self, g: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_hessian(mut self, h: impl Fn(&[T]) -> Matrix<T> + Send + Sync + 'static) -> Self {
        self.hessian = Some(Arc::new(h));
        self
    }

    /// Same field with the analytic derivatives removed.
    pub fn numeric_only(&self) -> Self {
        Self { dim: self.dim, eval: self.eval.clone(), gradient: None, hessian: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn has_analytic_hessian(&self) -> bool {
        self.hessian.is_some()
    }

    fn check_point(&self, x: &[T]) -> Result<()> {
        if x.len() < self.dim {
            return Err(Error::Dimension(format!("point has length {} but the field needs {}", x.len(), self.dim)));
        }
        Ok(())
    }

    pub fn eval(&self, x: &[T]) -> Result<T> {
        self.check_point(x)?;
        let v = (self.eval)(x);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("field value {v} at {x:?}")));
        }
        Ok(v)
    }

    /// Analytic gradient if supplied, else [`fd_gradient`] with default step.
    pub fn gradient_at(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_point(x)?;
        match &self.gradient {
            Some(g) => {
                let v = g(x);
                if v.len() != x.len() {
                    return Err(Error::LengthMismatch { expected: x.len(), found: v.len() });
                }
                Ok(v)
            }
            None => fd_gradient(self, x, None),
        }
    }

    /// Analytic Hessian if supplied, else [`fd_hessian`] with default step.
    pub fn hessian_at(&self, x: &[T]) -> Result<Matrix<T>> {
        self.check_point(x)?;
        match &self.hessian {
            Some(h) => {
                let m = h(x);
                if m.rows() != x.len() || m.cols() != x.len() {
                    return Err(Error::Dimension(format!(
                        "analytic Hessian is {}x{}, expected {n}x{n}",
                        m.rows(),
                        m.cols(),
                        n = x.len()
                    )));
                }
                Ok(m)
            }
            None => fd_hessian(self, x, None),
        }
    }

    /// Largest relative disagreement between the analytic derivatives and
    /// central differences at `x`, measured against `max(1, |analytic|)`.
    /// Missing analytic derivatives contribute 0.
    pub fn derivative_mismatch(&self, x: &[T]) -> Result<T> {
        let mut worst = T::zero();
        if let Some(g) = &self.gradient {
            let analytic = g(x);
            let numeric = fd_gradient(self, x, None)?;
            for (a, n) in analytic.iter().zip(&numeric) {
                worst = worst.max((*a - *n).abs() / a.abs().max(T::one()));
            }
        }
        if let Some(h) = &self.hessian {
            let analytic = h(x);
            let numeric = fd_hessian(self, x, None)?;
            for i in 0..x.len() {
                for j in 0..x.len() {
                    let (a, n) = (analytic[(i, j)], numeric[(i, j)]);
                    worst = worst.max((a - n).abs() / a.abs().max(T::one()));
                }
            }
        }
        Ok(worst)
    }
}

fn default_step<T: Scalar>(root: T, xi: T) -> T {
    T::epsilon().powf(root) * xi.abs().max(T::one())
}

fn finite<T: Scalar>(v: T, x: &[T]) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("field value {v} on the stencil near {x:?}")))
    }
}

/// Central-difference gradient. The default step is
/// `cbrt(eps) * max(1, |x_i|)` per coordinate.
pub fn fd_gradient<T: Scalar>(field: &ScalarField<T>, x: &[T], step: Option<T>) -> Result<Vec<T>> {
    field.check_point(x)?;
    if let Some(h) = step {
        if h.is_nan() || h <= T::zero() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
        }
    }
    let third = T::one() / T::lit(3.0);
    let mut p = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = step.unwrap_or_else(|| default_step(third, x[i]));
        let (hi, lo) = (x[i] + h, x[i] - h);
        p[i] = hi;
        let fp = finite((field.eval)(&p), x)?;
        p[i] = lo;
        let fm = finite((field.eval)(&p), x)?;
        p[i] = x[i];
        grad.push((fp - fm) / (hi - lo));
    }
    Ok(grad)
}

/// Central second differences with default step `eps^(1/4) * max(1, |x_i|)`.
/// Every entry is computed independently; the result is not symmetrized.
pub fn fd_hessian<T: Scalar>(field: &ScalarField<T>, x: &[T], step: Option<T>) -> Result<Matrix<T>> {
    field.check_point(x)?;
    if let Some(h) = step {
        if h.is_nan() || h <= T::zero() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
        }
    }
    let quarter = T::lit(0.25);
    let n = x.len();
    let steps: Vec<T> = x.iter().map(|&xi| step.unwrap_or_else(|| default_step(quarter, xi))).collect();
    let f0 = finite((field.eval)(x), x)?;
    let mut p = x.to_vec();
    let mut h = Matrix::zeros(n, n);
    let at = |p: &mut Vec<T>, moves: &[(usize, T)]| -> Result<T> {
        for &(i, d) in moves {
            p[i] = x[i] + d;
        }
        let v = finite((field.eval)(p), x);
        for &(i, _) in moves {
            p[i] = x[i];
        }
        v
    };
    for i in 0..n {
        for j in 0..n {
            let (hi, hj) = (steps[i], steps[j]);
            h[(i, j)] = if i == j {
                let fp = at(&mut p, &[(i, hi)])?;
                let fm = at(&mut p, &[(i, -hi)])?;
                (fp - f0 - f0 + fm) / (hi * hi)
            } else {
                let fpp = at(&mut p, &[(i, hi), (j, hj)])?;
                let fpm = at(&mut p, &[(i, hi), (j, -hj)])?;
                let fmp = at(&mut p, &[(i, -hi), (j, hj)])?;
                let fmm = at(&mut p, &[(i, -hi), (j, -hj)])?;
                (fpp - fpm - fmp + fmm) / (T::lit(4.0) * hi * hj)
            };
        }
    }
    Ok(h)
}

/// `sum_j f_j dx_{I_j}` with scalar-field coefficients.
#[derive(Debug, Clone)]
pub struct FieldForm<T> {
    arity: usize,
    terms: Vec<(ScalarField<T>, MultiIndex)>,
}

impl<T: Scalar> FieldForm<T> {
    pub fn new(arity: usize) -> Self {
        Self { arity, terms: Vec::new() }
    }

    /// Adds `field * dx_{indices}`; `indices` must be strictly increasing.
    pub fn push(&mut self, field: ScalarField<T>, indices: &[usize]) -> Result<()> {
        let key = MultiIndex::new(indices.to_vec())?;
        if key.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: key.arity() });
        }
        if !key.is_strictly_increasing() {
            return Err(Error::InvalidArgument(format!("indices ({key}) are not strictly increasing")));
        }
        self.terms.push((field, key));
        Ok(())
    }

    pub fn with(mut self, field: ScalarField<T>, indices: &[usize]) -> Result<Self> {
        self.push(field, indices)?;
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(ScalarField<T>, MultiIndex)] {
        &self.terms
    }

    pub fn dimension(&self) -> usize {
        self.terms.iter().map(|(_, k)| k.max_index()).max().unwrap_or(0)
    }

    /// The same form with every analytic derivative dropped.
    pub fn numeric_only(&self) -> Self {
        let terms = self.terms.iter().map(|(f, k)| (f.numeric_only(), k.clone())).collect();
        Self { arity: self.arity, terms }
    }

    fn check_point(&self, x: &[T]) -> Result<()> {
        if x.len() < self.dimension() {
            return Err(Error::Dimension(format!(
                "point has length {} but the form needs dimension {}",
                x.len(),
                self.dimension()
            )));
        }
        Ok(())
    }

    /// The constant-coefficient form obtained by evaluating every field at `x`.
    pub fn evaluate(&self, x: &[T]) -> Result<KForm<T>> {
        self.check_point(x)?;
        let mut out = KForm::zero(self.arity);
        for (f, key) in &self.terms {
            out = out.add(&KForm::elementary_wedge(key.as_slice())?.scale(f.eval(x)?))?;
        }
        Ok(out)
    }

    /// `d omega` at `x`: `sum_j grad(f_j)(x) ^ dx_{I_j}`.
    pub fn exterior_d(&self, x: &[T]) -> Result<KForm<T>> {
        self.check_point(x)?;
        let mut out = KForm::zero(self.arity + 1);
        for (f, key) in &self.terms {
            let df = KForm::grad(&f.gradient_at(x)?)?;
            out = out.add(&df.wedge(&KForm::elementary_wedge(key.as_slice())?))?;
        }
        Ok(out)
    }
}

/// The 1-form `sum_i x_i dx_i`.
pub fn grad<T: Scalar>(x: &[T]) -> Result<KForm<T>> {
    KForm::grad(x)
}

/// `sum_i dx_1 ^ .. ^ (omit dx_i) ^ .. ^ dx_n`, all coefficients 1.
pub fn hat<T: Scalar>(n: usize) -> Result<KForm<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("hat needs n >= 2, got {n}")));
    }
    let rows: Vec<Vec<usize>> = (1..=n).map(|skip| (1..=n).filter(|&j| j != skip).collect()).collect();
    KForm::from_rows(&rows, &vec![T::one(); n])
}

/// Gradient one-form whose wedge with [`hat`] is the exterior derivative of
/// `sum_i (-1)^(i-1) x_i / |x|^n  dx_1 ^ .. (omit dx_i) .. ^ dx_n`:
/// coefficient `i` is `(-1)^(i-1) (S^(n/2) - n x_i^2 S^(n/2-1)) / S^n`
/// with `S = |x|^2`.
pub fn omega_gradient<T: Scalar>(x: &[T]) -> Result<KForm<T>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty point".into()));
    }
    let s: T = x.iter().map(|&v| v * v).sum();
    if s.is_zero() {
        return Err(Error::Singular("omega is singular at the origin".into()));
    }
    let nn = T::from_count(n);
    let half = nn / T::lit(2.0);
    let s_half = s.powf(half);
    let s_half_m1 = s.powf(half - T::one());
    let s_n = s.powi(n as i32);
    let coeffs: Vec<T> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let c = (s_half - nn * xi * xi * s_half_m1) / s_n;
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    KForm::grad(&coeffs)
}

/// The form `sum_i (-1)^(i-1) x_i / |x|^n  hat_i` as a field form, whose
/// exterior derivative vanishes away from the origin.
pub fn omega_field_form<T: Scalar>(n: usize) -> Result<FieldForm<T>> {
    let hat_form = hat::<T>(n)?;
    let mut out = FieldForm::new(n - 1);
    for i in 0..n {
        let key: Vec<usize> = (1..=n).filter(|&j| j != i + 1).collect();
        debug_assert!(hat_form.coeff(&MultiIndex::new(key.clone())?) == T::one());
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        let field = ScalarField::new(n, move |x: &[T]| {
            let s: T = x[..n].iter().map(|&v| v * v).sum();
            sign * x[i] / s.powf(T::from_count(n) / T::lit(2.0))
        });
        out.push(field, &key)?;
    }
    Ok(out)
}

/// Builds `dd phi = sum_j (sum_{r,s} H_j[r, s] dx_r ^ dx_s) ^ dx_{I_j}` from
/// the Hessians of the coefficient fields at `x`. The Hessians are used as
/// computed (analytic or finite-difference), without symmetrization, so the
/// result vanishes exactly to the extent they are symmetric.
pub fn dd_check<T: Scalar>(fields: &[ScalarField<T>], wedges: &[MultiIndex], x: &[T]) -> Result<KForm<T>> {
    if fields.len() != wedges.len() {
        return Err(Error::LengthMismatch { expected: fields.len(), found: wedges.len() });
    }
    let arity = wedges.first().map_or(0, MultiIndex::arity);
    if let Some(bad) = wedges.iter().find(|w| w.arity() != arity) {
        return Err(Error::ArityMismatch { expected: arity, found: bad.arity() });
    }
    if let Some(bad) = wedges.iter().find(|w| w.max_index() > x.len()) {
        return Err(Error::Dimension(format!("wedge ({bad}) exceeds point dimension {}", x.len())));
    }
    let n = x.len();
    let pairs: Vec<Vec<usize>> = (1..=n).flat_map(|r| (1..=n).map(move |s| vec![r, s])).collect();
    let mut out = KForm::zero(arity + 2);
    for (field, wedge) in fields.iter().zip(wedges) {
        let h = field.hessian_at(x)?;
        let coeffs: Vec<T> = pairs.iter().map(|rs| h[(rs[0] - 1, rs[1] - 1)]).collect();
        let ddf = KForm::from_rows(&pairs, &coeffs)?;
        out = out.add(&ddf.wedge(&KForm::elementary_wedge(wedge.as_slice())?))?;
    }
    Ok(out)
}

/// The scalar fields `f1, f2, f3` on `(w, x, y, z)` used in the `d^2 = 0`
/// demonstration, with analytic gradients and Hessians.
pub mod demo {
    use super::*;

    /// `x + y^3 + x y w z`
    pub fn f1<T: Scalar>() -> ScalarField<T> {
        let three = T::lit(3.0);
        let six = T::lit(6.0);
        ScalarField::new(4, move |p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            x + y * y * y + x * y * w * z
        })
        .with_gradient(move |p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            vec![x * y * z, T::one() + y * w * z, three * y * y + x * w * z, x * y * w]
        })
        .with_hessian(move |p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            let zero = T::zero();
            symmetric(&[
                [zero, y * z, x * z, x * y],
                [y * z, zero, w * z, w * y],
                [x * z, w * z, six * y, w * x],
                [x * y, w * y, w * x, zero],
            ])
        })
    }

    /// `w^2 x y z + sin(w) + w + z`
    pub fn f2<T: Scalar>() -> ScalarField<T> {
        let two = T::lit(2.0);
        ScalarField::new(4, move |p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            w * w * x * y * z + w.sin() + w + z
        })
        .with_gradient(move |p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            vec![two * w * x * y * z + w.cos() + T::one(), w * w * y * z, w * w * x * z, w * w * x * y + T::one()]
        })
        .with_hessian(move |p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            let zero = T::zero();
            symmetric(&[
                [two * x * y * z - w.sin(), two * w * y * z, two * w * x * z, two * w * x * y],
                [two * w * y * z, zero, w * w * z, w * w * y],
                [two * w * x * z, w * w * z, zero, w * w * x],
                [two * w * x * y, w * w * y, w * w * x, zero],
            ])
        })
    }

    /// `w x y z + sin(x) + cos(w)`
    pub fn f3<T: Scalar>() -> ScalarField<T> {
        ScalarField::new(4, |p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            w * x * y * z + x.sin() + w.cos()
        })
        .with_gradient(|p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            vec![x * y * z - w.sin(), w * y * z + x.cos(), w * x * z, w * x * y]
        })
        .with_hessian(|p: &[T]| {
            let (w, x, y, z) = (p[0], p[1], p[2], p[3]);
            let zero = T::zero();
            symmetric(&[
                [-w.cos(), y * z, x * z, x * y],
                [y * z, -x.sin(), w * z, w * y],
                [x * z, w * z, zero, w * x],
                [x * y, w * y, w * x, zero],
            ])
        })
    }

    /// Index pairs `dw^dx, dw^dy, dy^dz` paired with `f1, f2, f3`.
    pub fn phi_wedges() -> [[usize; 2]; 3] {
        [[1, 2], [1, 3], [3, 4]]
    }

    /// `f1 dw^dx + f2 dw^dy + f3 dy^dz`.
    pub fn phi<T: Scalar>() -> FieldForm<T> {
        let fields = [f1(), f2(), f3()];
        let mut form = FieldForm::new(2);
        for (f, w) in fields.into_iter().zip(phi_wedges()) {
            form.push(f, &w).expect("valid demo wedge");
        }
        form
    }

    pub fn point<T: Scalar>() -> [T; 4] {
        [T::lit(1.0), T::lit(2.0), T::lit(3.0), T::lit(4.0)]
    }

    fn symmetric<T: Scalar>(rows: &[[T; 4]; 4]) -> Matrix<T> {
        Matrix::from_fn(4, 4, |i, j| rows[i][j])
    }
}
