//! Direct numerical check of Stokes's theorem on axis-aligned cubes.
//!
//! The test form on `R^n` is
//! `phi = (x_1 - x_2^2 + x_3^3 - ... +- x_n^n) * sum_i dx_1 ^ .. (omit dx_i) .. ^ dx_n`
//! with `d phi = (1 + 2 x_2 + ... + n x_n^(n-1)) dx_1 ^ .. ^ dx_n`. Over the
//! cube `C_a = [0, a]^n` both sides of `int_{dC} phi = int_C d phi` equal
//! `a^(n-1) (a + a^2 + ... + a^n)`.
//!
//! Boundary orientation: the face `x_i = a` carries sign `(-1)^(i-1)` and
//! the face `x_i = 0` carries `(-1)^i`; on each face the form is evaluated
//! on the tangent frame `e_j, j != i`, in increasing `j`.

use serde::Serialize;

use crate::derivative::{hat, FieldForm, ScalarField};
use crate::error::{Error, Result};
use crate::form::KForm;
use crate::linalg::{Matrix, PointFrame};
use crate::quadrature::QuadratureRule;
use crate::scalar::Scalar;

/// Largest cube dimension accepted by [`verify_stokes`].
pub const MAX_STOKES_DIM: usize = 6;

/// Default Gauss-Legendre order per axis.
pub const DEFAULT_ORDER: usize = 8;

/// The cube `[0, a]^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeDomain<T> {
    n: usize,
    a: T,
}

impl<T: Scalar> CubeDomain<T> {
    pub fn new(n: usize, a: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("cube dimension must be >= 2, got {n}")));
        }
        if !a.is_finite() || a <= T::zero() {
            return Err(Error::InvalidArgument(format!("edge length must be positive, got {a}")));
        }
        Ok(Self { n, a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn edge(&self) -> T {
        self.a
    }
}

/// `x_1 - x_2^2 + x_3^3 - ...`
fn alternating_power_sum<T: Scalar>(x: &[T]) -> T {
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let term = v.powi(i as i32 + 1);
            if i % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `1 + 2 x_2 + ... + n x_n^(n-1)`
fn weighted_power_sum<T: Scalar>(x: &[T]) -> T {
    x.iter().enumerate().map(|(i, &v)| T::from_count(i + 1) * v.powi(i as i32)).sum()
}

/// The `(n-1)`-form `phi` at the point `x`.
pub fn phi_example<T: Scalar>(x: &[T]) -> Result<KForm<T>> {
    Ok(hat::<T>(x.len())?.scale(alternating_power_sum(x)))
}

/// The top form `d phi` at the point `x`.
pub fn dphi_example<T: Scalar>(x: &[T]) -> Result<KForm<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dphi needs n >= 2, got {n}")));
    }
    let key: Vec<usize> = (1..=n).collect();
    KForm::from_rows(&[key], &[weighted_power_sum(x)])
}

/// `phi` as a form with field coefficients, for numeric differentiation.
pub fn phi_field_form<T: Scalar>(n: usize) -> Result<FieldForm<T>> {
    let mut out = FieldForm::new(n.saturating_sub(1));
    for (key, _) in hat::<T>(n)?.terms() {
        out.push(ScalarField::new(n, move |x: &[T]| alternating_power_sum(&x[..n])), key.as_slice())?;
    }
    Ok(out)
}

/// `a^(n-1) (a + a^2 + ... + a^n)`.
pub fn closed_form<T: Scalar>(n: usize, a: T) -> T {
    let s: T = (1..=n).map(|j| a.powi(j as i32)).sum();
    a.powi(n as i32 - 1) * s
}

/// Integral over the cube of the top-form-valued field, by tensor-product
/// quadrature of its single coefficient.
pub fn integrate_volume<T, F>(field: F, cube: &CubeDomain<T>, rule: &QuadratureRule<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(&[T]) -> Result<KForm<T>>,
{
    let n = cube.dim();
    let rule = rule.on_interval(T::zero(), cube.edge());
    let identity = Matrix::identity(n);
    rule.integrate_box(n, |x| {
        let form = field(x)?;
        if !form.is_zero() && form.arity() != n {
            return Err(Error::ArityMismatch { expected: n, found: form.arity() });
        }
        if form.is_zero() {
            return Ok(T::zero());
        }
        form.evaluate(&identity)
    })
}

/// Oriented integral over the `2n` faces of the cube of an
/// `(n-1)`-form-valued field.
pub fn integrate_boundary<T, F>(field: F, cube: &CubeDomain<T>, rule: &QuadratureRule<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(&[T]) -> Result<KForm<T>>,
{
    let n = cube.dim();
    let rule = rule.on_interval(T::zero(), cube.edge());
    let mut total = T::zero();
    let mut point = vec![T::zero(); n];
    for i in 0..n {
        let frame = face_frame::<T>(n, i);
        // face x_i = a has sign (-1)^(i-1) in 1-based numbering
        let outer_sign = if i % 2 == 0 { T::one() } else { -T::one() };
        for (side, sign) in [(cube.edge(), outer_sign), (T::zero(), -outer_sign)] {
            let face = rule.integrate_box(n - 1, |y| {
                point[i] = side;
                for (slot, &v) in (0..n).filter(|&j| j != i).zip(y) {
                    point[slot] = v;
                }
                let form = field(&point)?;
                if form.is_zero() {
                    return Ok(T::zero());
                }
                if form.arity() != n - 1 {
                    return Err(Error::ArityMismatch { expected: n - 1, found: form.arity() });
                }
                form.evaluate(&frame)
            })?;
            total += sign * face;
        }
    }
    Ok(total)
}

/// Tangent frame of the face normal to axis `skip` (0-based): columns
/// `e_j` for `j != skip`, increasing.
fn face_frame<T: Scalar>(n: usize, skip: usize) -> PointFrame<T> {
    Matrix::from_fn(n, n - 1, |r, c| {
        let j = if c < skip { c } else { c + 1 };
        if r == j {
            T::one()
        } else {
            T::zero()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesReport<T> {
    pub n: usize,
    pub a: T,
    pub m: usize,
    pub boundary: T,
    pub volume: T,
    pub closed_form: T,
    /// `|boundary - volume|`
    pub err_bv: T,
    /// `|volume - closed_form|`
    pub err_vc: T,
}

impl<T: Scalar> StokesReport<T> {
    /// Largest pairwise disagreement relative to `|closed_form|`.
    pub fn max_relative_error(&self) -> T {
        let err_bc = (self.boundary - self.closed_form).abs();
        let scale = self.closed_form.abs().max(T::min_positive_value());
        self.err_bv.max(self.err_vc).max(err_bc) / scale
    }
}

/// Boundary integral of `phi`, volume integral of `d phi` and the closed
/// form on `[0, a]^n` with an `m`-point rule per axis.
pub fn verify_stokes<T: Scalar>(n: usize, a: T, m: usize) -> Result<StokesReport<T>> {
    if !(2..=MAX_STOKES_DIM).contains(&n) {
        return Err(Error::Cost(format!("Stokes check supports 2 <= n <= {MAX_STOKES_DIM}, got {n}")));
    }
    let cube = CubeDomain::new(n, a)?;
    let rule = QuadratureRule::gauss_legendre(m)?;
    let boundary = integrate_boundary(phi_example, &cube, &rule)?;
    let volume = integrate_volume(dphi_example, &cube, &rule)?;
    let closed = closed_form(n, a);
    Ok(StokesReport {
        n,
        a,
        m,
        boundary,
        volume,
        closed_form: closed,
        err_bv: (boundary - volume).abs(),
        err_vc: (volume - closed).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub diff: T,
}

/// For a top form, `omega(E) = det(E) * omega(I_n)`.
pub fn verify_det_proportionality<T: Scalar>(omega: &KForm<T>, frame: &PointFrame<T>) -> Result<DetReport<T>> {
    let n = frame.rows();
    if !frame.is_square() {
        return Err(Error::Dimension(format!("frame is {}x{}, expected square", frame.rows(), frame.cols())));
    }
    if !omega.is_zero() && omega.arity() != n {
        return Err(Error::ArityMismatch { expected: n, found: omega.arity() });
    }
    if omega.is_zero() {
        return Ok(DetReport { lhs: T::zero(), rhs: T::zero(), diff: T::zero() });
    }
    let lhs = omega.evaluate(frame)?;
    let rhs = frame.determinant()? * omega.evaluate(&Matrix::identity(n))?;
    Ok(DetReport { lhs, rhs, diff: lhs - rhs })
}
