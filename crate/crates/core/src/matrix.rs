//! Dense row-major matrices and vector helpers over a [`Scalar`] field.
//!
//! Sizes here are desk scale (wedge dimensions are guarded upstream), so the
//! implementations favour clarity and determinism over blocking or SIMD.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense matrix, entries stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        assert!(!rows.is_empty(), "need at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Builds from a flat row-major slice.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "from_row_major",
                detail: format!("{} entries for a {rows}x{cols} matrix", data.len()),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Single-column matrix from a vector.
    pub fn column(v: &[T]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
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

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn col_range(&self, lo: usize, hi: usize) -> Matrix<T> {
        assert!(lo < hi && hi <= self.cols);
        Matrix::from_fn(self.rows, hi - lo, |i, j| self[(i, lo + j)])
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: T::Real) -> Matrix<T> {
        self.map(|x| x.scale(factor))
    }

    pub fn scale_scalar(&self, factor: T) -> Matrix<T> {
        self.map(|x| x * factor)
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "add: shape mismatch"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "sub: shape mismatch"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|x| -x)
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "mul: inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec: dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> T::Real {
        self.data
            .iter()
            .map(|x| x.modulus_sq())
            .sum::<T::Real>()
            .sqrt()
    }

    pub fn max_abs(&self) -> T::Real {
        self.data
            .iter()
            .map(|x| x.modulus())
            .fold(T::Real::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite_scalar())
    }

    /// Extracts the submatrix with the given (sorted or not) row and column indices.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Matrix<T> {
        Matrix::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self[(row_idx[i], col_idx[j])]
        })
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&Matrix<T>]) -> Result<Matrix<T>> {
        let rows = blocks
            .first()
            .map(|b| b.rows)
            .ok_or(Error::EmptyInput("hstack"))?;
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch {
                context: "hstack",
                detail: "blocks have differing row counts".into(),
            });
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    /// Determinant by LU with partial pivoting on entry modulus.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "det: matrix not square");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for k in 0..n {
            let mut pivot = k;
            let mut best = a[(k, k)].modulus();
            for i in k + 1..n {
                let m = a[(i, k)].modulus();
                if m > best {
                    best = m;
                    pivot = i;
                }
            }
            if best == T::Real::zero() {
                return T::zero();
            }
            if pivot != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                }
                det = -det;
            }
            let akk = a[(k, k)];
            det *= akk;
            for i in k + 1..n {
                let factor = a[(i, k)] / akk;
                if factor == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let sub = factor * a[(k, j)];
                    a[(i, j)] -= sub;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "inverse",
                detail: format!("{}x{} matrix", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for k in 0..n {
            let mut pivot = k;
            let mut best = a[(k, k)].modulus();
            for i in k + 1..n {
                let m = a[(i, k)].modulus();
                if m > best {
                    best = m;
                    pivot = i;
                }
            }
            if best == T::Real::zero() {
                return Err(Error::SingularMatrix);
            }
            if pivot != k {
                for j in 0..n {
                    a.data.swap(k * n + j, pivot * n + j);
                    inv.data.swap(k * n + j, pivot * n + j);
                }
            }
            let akk = a[(k, k)];
            for j in 0..n {
                a[(k, j)] = a[(k, j)] / akk;
                inv[(k, j)] = inv[(k, j)] / akk;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a[(i, k)];
                if factor == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let s = factor * a[(k, j)];
                    a[(i, j)] -= s;
                    let s = factor * inv[(k, j)];
                    inv[(i, j)] -= s;
                }
            }
        }
        Ok(inv)
    }

    /// Modified Gram-Schmidt orthonormalization of the columns.
    ///
    /// Fails with [`Error::RankDeficient`] when a column is (numerically) in
    /// the span of the previous ones.
    pub fn orthonormalize_columns(&self) -> Result<Matrix<T>> {
        let mut q = self.clone();
        let tol = T::real_from_f64(1e-12);
        for j in 0..q.cols {
            let mut col = q.col(j);
            for prev in 0..j {
                let p = q.col(prev);
                let proj = dot_hermitian(&col, &p);
                for i in 0..col.len() {
                    col[i] -= p[i] * proj;
                }
            }
            let norm = vec_norm(&col);
            let input_scale = vec_norm(&q.col(j));
            if norm
                <= tol
                    * if input_scale > T::Real::one() {
                        input_scale
                    } else {
                        T::Real::one()
                    }
            {
                return Err(Error::RankDeficient);
            }
            let inv = T::Real::one() / norm;
            for i in 0..q.rows {
                q[(i, j)] = col[i].scale(inv);
            }
        }
        Ok(q)
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Bilinear dot product `sum_i a_i b_i` (no conjugation).
pub fn dot_bilinear<T: Scalar>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Hermitian inner product `<a, b> = sum_i a_i conj(b_i)`, linear in the first slot.
pub fn dot_hermitian<T: Scalar>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y.conj()).sum()
}

/// Euclidean norm of a vector.
pub fn vec_norm<T: Scalar>(v: &[T]) -> T::Real {
    v.iter().map(|x| x.modulus_sq()).sum::<T::Real>().sqrt()
}

/// Normalizes to unit Euclidean norm; errors on (near-)zero input.
pub fn normalize<T: Scalar>(v: &[T]) -> Result<Vec<T>> {
    let n = vec_norm(v);
    if n == T::Real::zero() || !n.is_finite() {
        return Err(Error::RankDeficient);
    }
    let inv = T::Real::one() / n;
    Ok(v.iter().map(|x| x.scale(inv)).collect())
}
