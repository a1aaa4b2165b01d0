//! Dense row-major matrices and vectors.
//!
//! Both types are immutable values: every operation returns a new value and
//! construction rejects non-finite entries.

use std::fmt;
use std::ops::{Deref, Index};

use crate::error::{dim_check, Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

#[derive(Clone, PartialEq)]
pub struct Vector<T>(Vec<T>);

fn check_finite<T: Scalar>(xs: &[T]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

impl<T: Scalar> Vector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        check_finite(&entries)?;
        Ok(Vector(entries))
    }

    pub fn from_f64(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| T::lit(x)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Vector(vec![T::zero(); len.max(1)])
    }

    /// Wraps results of internal arithmetic on finite inputs.
    pub(crate) fn from_vec_unchecked(entries: Vec<T>) -> Self {
        Vector(entries)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn norm(&self) -> T {
        norm2(&self.0)
    }

    pub fn norm_inf(&self) -> T {
        self.0.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn dot(&self, other: &Vector<T>) -> T {
        dot(&self.0, &other.0)
    }

    pub fn sub(&self, other: &Vector<T>) -> Vector<T> {
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    pub fn add(&self, other: &Vector<T>) -> Vector<T> {
        Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn scale(&self, s: T) -> Vector<T> {
        Vector(self.0.iter().map(|&a| a * s).collect())
    }

    pub fn distance(&self, other: &Vector<T>) -> T {
        self.sub(other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl<T> Deref for Vector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T: fmt::Debug> fmt::Debug for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Euclidean norm with scaling against overflow and underflow.
pub(crate) fn norm2<T: Scalar>(xs: &[T]) -> T {
    let scale = xs.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let ss = xs.iter().fold(T::zero(), |s, &x| {
        let y = x / scale;
        s + y * y
    });
    scale * ss.sqrt()
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        dim_check(data.len() == rows * cols, || {
            format!("{} entries for a {rows}x{cols} matrix", data.len())
        })?;
        check_finite(&data)?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            dim_check(r.len() == n, || {
                format!("row {i} has {} entries, expected {n}", r.len())
            })?;
        }
        Self::new(rows.len(), n, rows.concat())
    }

    /// Convenience for literals in tests and examples.
    pub fn from_f64_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| T::lit(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

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
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Square diagonal matrix.
    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<T>]) -> Result<Self> {
        let k = cols.len();
        let n = cols.first().map_or(0, |c| c.len());
        for (j, c) in cols.iter().enumerate() {
            dim_check(c.len() == n, || {
                format!("column {j} has length {}, expected {n}", c.len())
            })?;
        }
        let mut data = vec![T::zero(); n * k];
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                data[i * k + j] = x;
            }
        }
        Self::new(n, k, data)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> Vector<T> {
        Vector(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: T) -> Result<Self> {
        dim_check(i < self.rows && j < self.cols, || {
            format!("entry ({i},{j}) outside {}x{}", self.rows, self.cols)
        })?;
        check_finite(&[value])?;
        let mut m = self.clone();
        m.data[i * self.cols + j] = value;
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Result<Self> {
        dim_check(self.cols == other.rows, || {
            format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )
        })?;
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut data = vec![T::zero(); m * n];
        for i in 0..m {
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == T::zero() {
                    continue;
                }
                let orow = other.row(p);
                let out = &mut data[i * n..(i + 1) * n];
                for (o, &b) in out.iter_mut().zip(orow) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(Matrix { rows: m, cols: n, data })
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vector<T>> {
        dim_check(self.cols == x.len(), || {
            format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )
        })?;
        Ok(Vector((0..self.rows).map(|i| dot(self.row(i), x)).collect()))
    }

    /// `selfᵀ·x` without forming the transpose.
    pub fn tr_matvec(&self, x: &[T]) -> Result<Vector<T>> {
        dim_check(self.rows == x.len(), || {
            format!(
                "cannot apply transpose of {}x{} to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )
        })?;
        let mut out = vec![T::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a * xi;
            }
        }
        Ok(Vector(out))
    }

    fn zip_with(&self, other: &Matrix<T>, f: impl Fn(T, T) -> T) -> Result<Self> {
        dim_check(self.shape() == other.shape(), || {
            format!("shapes {:?} and {:?} differ", self.shape(), other.shape())
        })?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Matrix<T>) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix<T>) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> T {
        norm2(&self.data)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |s, x| s + x.abs()))
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == T::zero())
    }

    /// Symmetric to within `rtol · max|a_ij|`.
    pub fn is_symmetric(&self, rtol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let bound = rtol * self.max_abs();
        (0..self.rows).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= bound))
    }

    /// Appends a row of constants at the bottom.
    pub fn append_row(&self, value: T) -> Self {
        let mut data = self.data.clone();
        data.extend(std::iter::repeat_n(value, self.cols));
        Matrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        }
    }

    /// Splits off the last column.
    pub fn split_last_column(&self) -> Result<(Matrix<T>, Vector<T>)> {
        if self.cols < 2 {
            return Err(Error::DimMismatch("need at least two columns to split".into()));
        }
        let c = self.cols - 1;
        let mut data = Vec::with_capacity(self.rows * c);
        let mut last = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend_from_slice(&r[..c]);
            last.push(r[c]);
        }
        Ok((
            Matrix {
                rows: self.rows,
                cols: c,
                data,
            },
            Vector(last),
        ))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in self.data.chunks(self.cols.max(1)) {
            writeln!(f, "  {:?}", r)?;
        }
        write!(f, "]")
    }
}
