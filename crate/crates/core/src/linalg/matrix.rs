//! Column-major dense matrix.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Range};

use super::vector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense matrix stored column by column.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type DenseMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<crate::scalar::Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
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

    /// Builds a matrix from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from a slice of rows; handy for literals in tests.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, 0);
        for c in columns {
            m.push_column(c);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn column_vector(v: &[T]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        let r = self.rows;
        &mut self.data[j * r..(j + 1) * r]
    }

    /// Disjoint column slices `(a, b)` with `a < b`, the second mutable.
    pub(crate) fn col_pair_mut(&mut self, a: usize, b: usize) -> (&[T], &mut [T]) {
        assert!(a < b && b < self.cols);
        let r = self.rows;
        let (lo, hi) = self.data.split_at_mut(b * r);
        (&lo[a * r..(a + 1) * r], &mut hi[..r])
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn column_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.cols).map(move |j| self.col(j))
    }

    pub fn push_column(&mut self, c: &[T]) {
        assert_eq!(c.len(), self.rows, "column length mismatch");
        self.data.extend_from_slice(c);
        self.cols += 1;
    }

    /// Appends a zero row at the bottom.
    pub fn push_zero_row(&mut self) {
        let r = self.rows;
        let mut data = Vec::with_capacity((r + 1) * self.cols);
        for j in 0..self.cols {
            data.extend_from_slice(&self.data[j * r..(j + 1) * r]);
            data.push(T::zero());
        }
        self.rows += 1;
        self.data = data;
    }

    pub fn columns(&self, range: Range<usize>) -> Self {
        let r = self.rows;
        Matrix {
            rows: r,
            cols: range.len(),
            data: self.data[range.start * r..range.end * r].to_vec(),
        }
    }

    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)]
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, a: T) -> Self {
        self.map(|v| v * a)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: vector::add(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: vector::sub(&self.data, &other.data),
        }
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                other[(i - self.rows, j)]
            }
        })
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut y = vec![T::zero(); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != T::zero() {
                vector::axpy(xj, self.col(j), &mut y);
            }
        }
        y
    }

    /// `selfᴴ·x`.
    pub fn adjoint_matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows, "adjoint matvec dimension mismatch");
        self.column_iter().map(|c| vector::dot(c, x)).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let oc = other.col(j);
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in oc.iter().enumerate() {
                if b != T::zero() {
                    vector::axpy(b, self.col(k), dst);
                }
            }
        }
        out
    }

    /// `selfᴴ·other`.
    pub fn adjoint_matmul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "adjoint matmul dimension mismatch");
        Self::from_fn(self.cols, other.cols, |i, j| {
            vector::dot(self.col(i), other.col(j))
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        vector::norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Induced 1-norm (max column sum).
    pub fn norm1(&self) -> f64 {
        self.column_iter()
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `‖I − selfᴴ·self‖_F`.
    pub fn orthonormality_loss(&self) -> f64 {
        let g = self.adjoint_matmul(self);
        g.sub(&Self::identity(self.cols)).frobenius_norm()
    }
}

impl Matrix<f64> {
    pub fn to_scalar<T: Scalar>(&self) -> Matrix<T> {
        self.map(T::from_real)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
