//! Gauss-Legendre rules and tensor-product quadrature over boxes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One-dimensional quadrature rule `sum_i w_i f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> QuadratureRule<T> {
    /// `m`-point Gauss-Legendre rule on `[-1, 1]`, exact for polynomials of
    /// degree `<= 2m - 1`. Nodes are ascending.
    pub fn gauss_legendre(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("Gauss-Legendre order must be >= 2, got {m}")));
        }
        let two = T::lit(2.0);
        let mut nodes = vec![T::zero(); m];
        let mut weights = vec![T::zero(); m];
        let tol = T::epsilon() * T::lit(4.0);
        for i in 0..m.div_ceil(2) {
            // Tricomi-style initial guess for the i-th largest root
            let mut x = (T::lit(std::f64::consts::PI) * (T::from_count(i) + T::lit(0.75))
                / (T::from_count(m) + T::lit(0.5)))
            .cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(m, x);
            if d.is_finite() {
                dp = d;
            }
            let w = two / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = T::zero();
        }
        Ok(Self { nodes, weights })
    }

    /// Affine map of the rule onto `[lo, hi]`.
    pub fn on_interval(&self, lo: T, hi: T) -> Self {
        let half = (hi - lo) / T::lit(2.0);
        let mid = (hi + lo) / T::lit(2.0);
        Self {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Tensor-product rule over `dim` copies of this rule. Nodes are visited
    /// in lexicographic order of their per-axis indices and the sum is
    /// accumulated in that order.
    pub fn integrate_box<F>(&self, dim: usize, mut f: F) -> Result<T>
    where
        F: FnMut(&[T]) -> Result<T>,
    {
        let m = self.len();
        let mut idx = vec![0usize; dim];
        let mut point: Vec<T> = vec![self.nodes[0]; dim];
        let mut total = T::zero();
        loop {
            let mut w = T::one();
            for (axis, &k) in idx.iter().enumerate() {
                point[axis] = self.nodes[k];
                w *= self.weights[k];
            }
            total += w * f(&point)?;
            // odometer, last axis fastest
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return Ok(total);
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < m {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre_with_derivative<T: Scalar>(m: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=m {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let mf = T::from_count(m);
    let d = mf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_two_and_three_point_rules() {
        let r = QuadratureRule::<f64>::gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-15 && (r.nodes()[1] - x).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
        let r = QuadratureRule::<f64>::gauss_legendre(3).unwrap();
        assert!((r.nodes()[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.weights()[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for m in 2..20 {
            let r = QuadratureRule::<f64>::gauss_legendre(m).unwrap().on_interval(0.0, 2.5);
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.5).abs() < 1e-13, "m = {m}");
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_monomials_up_to_degree_2m_minus_1() {
        for m in 2..10 {
            let a = 1.7;
            let r = QuadratureRule::<f64>::gauss_legendre(m).unwrap().on_interval(0.0, a);
            for p in 0..2 * m as i32 {
                let exact = a.powi(p + 1) / f64::from(p + 1);
                let q = r.integrate(|x| x.powi(p));
                assert!((q - exact).abs() <= 1e-12 * exact, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn box_integral_of_product() {
        let r = QuadratureRule::<f64>::gauss_legendre(4).unwrap().on_interval(0.0, 2.0);
        // int_[0,2]^3 x y^2 z^3 = 2 * 8/3 * 4
        let q = r.integrate_box(3, |p| Ok(p[0] * p[1] * p[1] * p[2].powi(3))).unwrap();
        assert!((q - 2.0 * 8.0 / 3.0 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_low_order() {
        assert!(QuadratureRule::<f64>::gauss_legendre(1).is_err());
    }
}
