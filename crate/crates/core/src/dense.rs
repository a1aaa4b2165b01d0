//! Gaussian elimination with partial pivoting for small dense systems.

use crate::error::{dim_check, Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;

/// Relative pivot threshold: a pivot below `PIVOT_RTOL · ‖M‖_∞` means singular.
pub const PIVOT_RTOL: f64 = 1e-13;

/// Solves `m · x = b`. Returns [`Error::Singular`] when a pivot falls below
/// `1e-13 · ‖m‖_∞`.
pub fn solve<T: Scalar>(m: &Matrix<T>, b: &[T]) -> Result<Vector<T>> {
    let x = solve_many(m, &[b])?;
    Ok(x.into_iter().next().expect("one right-hand side"))
}

/// Solves `m · x = b` for several right-hand sides with one factorization.
pub fn solve_many<T: Scalar>(m: &Matrix<T>, rhs: &[&[T]]) -> Result<Vec<Vector<T>>> {
    let n = m.n_rows();
    dim_check(m.is_square(), || {
        format!("solve needs a square matrix, got {:?}", m.shape())
    })?;
    for b in rhs {
        dim_check(b.len() == n, || {
            format!("right-hand side of length {} for order {n}", b.len())
        })?;
    }
    let threshold = T::tol_floor(PIVOT_RTOL, 16.0) * m.norm_inf();
    let nr = rhs.len();
    let width = n + nr;
    // augmented [M | B], row-major
    let mut w = vec![T::zero(); n * width];
    for i in 0..n {
        w[i * width..i * width + n].copy_from_slice(m.row(i));
        for (c, b) in rhs.iter().enumerate() {
            w[i * width + n + c] = b[i];
        }
    }

    for col in 0..n {
        let (piv, pmax) =
            (col..n)
                .map(|r| (r, w[r * width + col].abs()))
                .fold(
                    (col, T::neg_infinity()),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if !(pmax > threshold) {
            return Err(Error::Singular);
        }
        if piv != col {
            for j in 0..width {
                w.swap(col * width + j, piv * width + j);
            }
        }
        let p = w[col * width + col];
        for r in col + 1..n {
            let factor = w[r * width + col] / p;
            if factor == T::zero() {
                continue;
            }
            for j in col..width {
                let v = w[col * width + j];
                w[r * width + j] = w[r * width + j] - factor * v;
            }
        }
    }

    let mut out = Vec::with_capacity(nr);
    for c in 0..nr {
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = w[i * width + n + c];
            for j in i + 1..n {
                s = s - w[i * width + j] * x[j];
            }
            x[i] = s / w[i * width + i];
        }
        out.push(Vector::from_vec_unchecked(x));
    }
    Ok(out)
}

/// Inverse by solving against the identity columns.
pub fn inverse<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let n = m.n_rows();
    let eye = Matrix::<T>::identity(n);
    let cols: Vec<Vec<T>> = (0..n).map(|j| eye.column(j).into_vec()).collect();
    let refs: Vec<&[T]> = cols.iter().map(|c| c.as_slice()).collect();
    let xs = solve_many(m, &refs)?;
    Matrix::from_columns(&xs)
}
