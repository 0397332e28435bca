//! Small dense matrices over any [`Scalar`].
//!
//! Sizes in this crate never exceed `(n+1) x (n+1)` with `n <= 4`, so the
//! routines favour clarity over blocking or cache tricks.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format!("{:?}", self[(r, c)]))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Row-major construction; panics if the length is wrong.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Mat { rows, cols, data }
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { T::zero() })
    }

    /// Block-diagonal `diag(a, b)`.
    pub fn block_diag(a: &Mat<T>, b: &Mat<T>) -> Self {
        let rows = a.rows + b.rows;
        let cols = a.cols + b.cols;
        Self::from_fn(rows, cols, |r, c| {
            if r < a.rows && c < a.cols {
                a[(r, c)].clone()
            } else if r >= a.rows && c >= a.cols {
                b[(r - a.rows, c - a.cols)].clone()
            } else {
                T::zero()
            }
        })
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

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<T> {
        Mat::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn add(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        })
    }

    pub fn sub(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        })
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out[(r, c)].clone() + a.clone() * other[(k, c)].clone();
                    out[(r, c)] = v;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|v| {
                let m = v.modulus();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in from..self.rows {
            let v = &self[(r, col)];
            if v.is_zero() {
                continue;
            }
            let m = v.modulus();
            if T::EXACT {
                return Some(r);
            }
            if best.is_none_or(|(_, bm)| m > bm) {
                best = Some((r, m));
            }
        }
        best.map(|(r, _)| r)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = m.pivot_row(col, col) else {
                return T::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = det * piv.clone();
            for r in col + 1..n {
                let f = m[(r, col)].clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m[(r, c)].clone() - f.clone() * m[(col, c)].clone();
                    m[(r, c)] = v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Mat<T>> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv: Mat<T> = Mat::identity(n);
        for col in 0..n {
            let p = m.pivot_row(col, col)?;
            m.swap_rows(p, col);
            inv.swap_rows(p, col);
            let piv = m[(col, col)].clone();
            if !T::EXACT && piv.modulus() < 1e-300 {
                return None;
            }
            for c in 0..n {
                m[(col, c)] = m[(col, c)].clone() / piv.clone();
                inv[(col, c)] = inv[(col, c)].clone() / piv.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = m[(r, c)].clone() - f.clone() * m[(col, c)].clone();
                    m[(r, c)] = v;
                    let w = inv[(r, c)].clone() - f.clone() * inv[(col, c)].clone();
                    inv[(r, c)] = w;
                }
            }
        }
        Some(inv)
    }

    /// Elementary symmetric functions `e_0..=e_n` of the eigenvalues, read off
    /// the characteristic polynomial (Faddeev-LeVerrier recursion).
    pub fn eigen_elementary(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        // char poly det(tI - A) = sum_k c_k t^{n-k}, e_k = (-1)^k c_k
        let mut coeffs = vec![T::one()];
        let mut mk = Mat::zeros(n, n);
        for k in 1..=n {
            let mut next = self.matmul(&mk);
            let c_prev = coeffs[k - 1].clone();
            for i in 0..n {
                next[(i, i)] = next[(i, i)].clone() + c_prev.clone();
            }
            let ck = -(self.matmul(&next).trace()) / T::from_i64(k as i64);
            coeffs.push(ck);
            mk = next;
        }
        coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c } else { -c })
            .collect()
    }

    pub fn approx_eq(&self, other: &Mat<T>, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;

    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn exact_inverse_and_det() {
        let m = Mat::from_rows(2, 2, vec![q(2, 1), q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(m.det(), q(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Mat::from_rows(2, 2, vec![q(1, 1), q(2, 1), q(2, 1), q(4, 1)]);
        assert!(m.inverse().is_none());
        assert_eq!(m.det(), q(0, 1));
    }

    #[test]
    fn elementary_symmetric_from_char_poly() {
        // diag(2,3,5): e1 = 10, e2 = 31, e3 = 30
        let m = Mat::diag(&[q(2, 1), q(3, 1), q(5, 1)]);
        assert_eq!(
            m.eigen_elementary(),
            vec![q(1, 1), q(10, 1), q(31, 1), q(30, 1)]
        );
        // a non-diagonal conjugate has the same invariants
        let p = Mat::from_rows(
            3,
            3,
            vec![q(1, 1), q(2, 1), q(0, 1), q(0, 1), q(1, 1), q(3, 1), q(1, 1), q(0, 1), q(1, 1)],
        );
        let conj = &(&p * &m) * &p.inverse().unwrap();
        assert_eq!(conj.eigen_elementary(), m.eigen_elementary());
    }

    #[test]
    fn complex_det_matches_product_of_diagonal() {
        let m = Mat::from_rows(
            2,
            2,
            vec![C64::new(0.0, 1.0), C64::new(3.0, 0.0), C64::new(0.0, 0.0), C64::new(2.0, 0.0)],
        );
        assert!(m.det().approx_eq(&C64::new(0.0, 2.0), 1e-15));
    }
}
