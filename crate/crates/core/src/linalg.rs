//! Small dense matrices: point frames, pullback matrices, Hessians.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense column-major matrix.
///
/// Used as a point frame (column `j` is the `j`-th argument vector of an
/// evaluation), as a pullback matrix (`dx_i = sum_r M[i, r] dy_r`) and for
/// Hessians.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// `n x k` matrix whose columns are the arguments of a `k`-linear map.
pub type PointFrame<T> = Matrix<T>;

/// Square matrix `M` of a change of variables `dx_i = sum_r M[i, r] dy_r`.
pub type PullbackMatrix<T> = Matrix<T>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::LengthMismatch { expected: ncols, found: bad.len() });
        }
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    /// Builds from a list of equal-length columns.
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let ncols = columns.len();
        let nrows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != nrows) {
            return Err(Error::LengthMismatch { expected: nrows, found: bad.len() });
        }
        Ok(Self { rows: nrows, cols: ncols, data: columns.concat() })
    }

    /// Single-column frame.
    pub fn column_vector(v: &[T]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Columns `start..` as a new frame.
    pub fn drop_leading_columns(&self, count: usize) -> Self {
        let count = count.min(self.cols);
        Self { rows: self.rows, cols: self.cols - count, data: self.data[count * self.rows..].to_vec() }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(a * self.rows + i, b * self.rows + i);
        }
    }

    pub fn set_column(&mut self, j: usize, v: &[T]) {
        assert_eq!(v.len(), self.rows, "column length");
        self.data[j * self.rows..(j + 1) * self.rows].copy_from_slice(v);
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| (0..self.cols).map(|r| self[(i, r)] * other[(r, j)]).sum()))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of non-square {}x{} matrix", self.rows, self.cols)));
        }
        Ok(lu_determinant(self.rows, |i, j| self[(i, j)]))
    }

    /// Determinant of the square submatrix on the given 0-based rows and
    /// columns, in the order given.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> T {
        debug_assert_eq!(rows.len(), cols.len());
        lu_determinant(rows.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().partial_cmp(&a[(y, col)].abs()).unwrap())
                .expect("nonempty range");
            if a[(pivot, col)].is_zero() {
                return Err(Error::Singular("matrix is not invertible".into()));
            }
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (acj, icj) = (a[(col, j)], inv[(col, j)]);
                    a[(i, j)] -= f * acj;
                    inv[(i, j)] -= f * icj;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(j * self.rows + a, j * self.rows + b);
        }
    }
}

/// LU with partial pivoting on a `k x k` matrix given elementwise.
/// The empty matrix has determinant 1.
fn lu_determinant<T: Scalar>(k: usize, entry: impl Fn(usize, usize) -> T) -> T {
    match k {
        0 => return T::one(),
        1 => return entry(0, 0),
        2 => return entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0),
        _ => {}
    }
    let mut a: Vec<T> = (0..k * k).map(|idx| entry(idx / k, idx % k)).collect();
    let mut det = T::one();
    for col in 0..k {
        let mut pivot = col;
        let mut best = a[col * k + col].abs();
        for r in col + 1..k {
            let v = a[r * k + col].abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best.is_zero() {
            return T::zero();
        }
        if pivot != col {
            for j in 0..k {
                a.swap(col * k + j, pivot * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for r in col + 1..k {
            let f = a[r * k + col] / p;
            if f.is_zero() {
                continue;
            }
            for j in col + 1..k {
                let u = a[col * k + j];
                a[r * k + j] -= f * u;
            }
        }
    }
    det
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[j * self.rows + i]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[j * self.rows + i]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs).expect("conformable matrices")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion; exponential, fine for tiny matrices.
    fn det_laplace(m: &Matrix<f64>) -> f64 {
        let n = m.rows();
        if n == 0 {
            return 1.0;
        }
        if n == 1 {
            return m[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let sub = Matrix::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })]);
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * m[(0, j)] * det_laplace(&sub)
            })
            .sum()
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = Matrix::from_rows(&[
            vec![2.0, -1.0, 0.5, 3.0],
            vec![1.0, 4.0, -2.0, 0.0],
            vec![0.0, 1.5, 1.0, -1.0],
            vec![3.0, 0.0, 2.0, 1.0],
        ])
        .unwrap();
        let lu = m.determinant().unwrap();
        let laplace = det_laplace(&m);
        assert!((lu - laplace).abs() < 1e-12 * laplace.abs().max(1.0));
    }

    #[test]
    fn determinant_edge_cases() {
        assert_eq!(Matrix::<f64>::identity(0).determinant().unwrap(), 1.0);
        let singular = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![0.0, 1.0, 1.0]]).unwrap();
        assert_eq!(singular.determinant().unwrap(), 0.0);
        assert!(Matrix::<f64>::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn minor_of_counting_matrix() {
        // columns (1,2,3), (4,5,6), (7,8,9)
        let m = Matrix::from_columns(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 9.0]]).unwrap();
        assert_eq!(m.minor(&[0, 1], &[0, 1]), -3.0);
        assert_eq!(m.minor(&[0, 2], &[1, 2]), -6.0);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(&[vec![4.0, 7.0, 2.0], vec![3.0, 6.0, 1.0], vec![2.0, 5.0, 3.0]]).unwrap();
        let inv = m.inverse().unwrap();
        let prod = &m * &inv;
        let eye = Matrix::identity(3);
        let err = prod.add(&eye.scale(-1.0)).unwrap().max_abs();
        assert!(err < 1e-12);
        assert!(Matrix::<f64>::zeros(2, 2).inverse().is_err());
    }

    #[test]
    fn column_helpers() {
        let mut m = Matrix::from_columns(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!(m.column(1), &[3.0, 4.0]);
        assert_eq!(m.drop_leading_columns(1).column(0), &[3.0, 4.0]);
        m.swap_columns(0, 2);
        assert_eq!(m.column(0), &[5.0, 6.0]);
        assert_eq!(m.transpose().rows(), 3);
    }
}
