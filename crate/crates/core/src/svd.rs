//! Singular value decomposition by one-sided Jacobi rotations, plus the
//! quantities derived from it (spectral norm, numerical rank, condition number).

use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, Matrix, Vector};
use crate::scalar::Scalar;

pub const MAX_SWEEPS: usize = 60;

/// `a = u · diag(sigma) · vᵀ` with `u` K×K, `v` N×N and `sigma` of length
/// min(K, N), non-negative and non-increasing.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub sigma: Vector<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn largest(&self) -> T {
        self.sigma[0]
    }

    /// Default threshold below which a singular value counts as zero:
    /// `max(K, N) · ε · σ₀`.
    pub fn default_tol(&self) -> T {
        let dim = self.u.n_rows().max(self.v.n_rows());
        T::from_usize_lossy(dim) * T::epsilon() * self.largest()
    }

    /// Number of singular values strictly above `tol`.
    pub fn rank_above(&self, tol: T) -> usize {
        self.sigma.iter().filter(|&&s| s > tol).count()
    }

    pub fn rank(&self) -> usize {
        self.rank_above(self.default_tol())
    }

    /// `u · diag(sigma) · vᵀ`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let (k, n) = (self.u.n_rows(), self.v.n_rows());
        let mut data = vec![T::zero(); k * n];
        for (p, &s) in self.sigma.iter().enumerate() {
            if s == T::zero() {
                continue;
            }
            for i in 0..k {
                let us = self.u.get(i, p) * s;
                for j in 0..n {
                    data[i * n + j] = data[i * n + j] + us * self.v.get(j, p);
                }
            }
        }
        Matrix::from_vec_unchecked(k, n, data)
    }
}

/// Full SVD of a dense real matrix.
pub fn svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    let (k, n) = a.shape();
    if k >= n {
        jacobi_tall(a)
    } else {
        let t = jacobi_tall(&a.transpose())?;
        Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// One-sided Jacobi on a matrix with at least as many rows as columns.
fn jacobi_tall<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let tol = T::tol_floor(1e-14, 16.0);

    // column-major working copies
    let mut w: Vec<Vec<T>> = (0..n).map(|j| a.column(j).into_vec()).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha = dot(&w[i], &w[i]);
                let beta = dot(&w[j], &w[j]);
                let gamma = dot(&w[i], &w[j]);
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + T::one().hypot(zeta));
                let c = T::one() / T::one().hypot(t);
                let s = c * t;
                rotate(&mut w, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<T> = w.iter().map(|c| norm2(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap().then(x.cmp(&y)));

    let sigma: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let floor = T::min_positive_value() / T::epsilon();
    let mut u_cols: Vec<Vec<T>> = Vec::with_capacity(m);
    for &j in &order {
        let s = norms[j];
        if s > floor {
            u_cols.push(w[j].iter().map(|&x| x / s).collect());
        } else {
            break;
        }
    }
    complete_basis(&mut u_cols, m);

    let mut u = Vec::with_capacity(m * m);
    for i in 0..m {
        for col in &u_cols {
            u.push(col[i]);
        }
    }
    let vm: Vec<T> = (0..n)
        .flat_map(|i| order.iter().map(|&j| v[j][i]).collect::<Vec<_>>())
        .collect();
    Ok(Svd {
        u: Matrix::from_vec_unchecked(m, m, u),
        sigma: Vector::from_vec_unchecked(sigma),
        v: Matrix::from_vec_unchecked(n, n, vm),
    })
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], i: usize, j: usize, c: T, s: T) {
    let (lo, hi) = cols.split_at_mut(j);
    for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Extends orthonormal columns to a basis of R^m using the standard basis
/// vector least represented by the current span, orthogonalized twice.
fn complete_basis<T: Scalar>(cols: &mut Vec<Vec<T>>, m: usize) {
    while cols.len() < m {
        let k = (0..m)
            .map(|k| {
                let covered = cols.iter().fold(T::zero(), |s, c| s + c[k] * c[k]);
                (k, T::one() - covered)
            })
            .fold(
                (0, T::neg_infinity()),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            )
            .0;
        let mut r = vec![T::zero(); m];
        r[k] = T::one();
        for _ in 0..2 {
            for c in cols.iter() {
                let p = dot(c, &r);
                for (ri, &ci) in r.iter_mut().zip(c) {
                    *ri = *ri - p * ci;
                }
            }
        }
        let nr = norm2(&r);
        cols.push(r.into_iter().map(|x| x / nr).collect());
    }
}

/// Largest singular value; zero for the zero matrix.
pub fn spectral_norm<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if a.is_zero() {
        return Ok(T::zero());
    }
    Ok(svd(a)?.largest())
}

/// Count of singular values above `tol` (default `max(K,N)·ε·σ₀`).
pub fn numerical_rank<T: Scalar>(a: &Matrix<T>, tol: Option<T>) -> Result<usize> {
    let s = svd(a)?;
    let tol = tol.unwrap_or_else(|| s.default_tol());
    Ok(s.rank_above(tol))
}

/// `σ₀ / σ_{r-1}` over the numerical rank `r`; infinite when rank-deficient.
pub fn condition_number<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let s = svd(a)?;
    Ok(condition_from_svd(&s))
}

pub(crate) fn condition_from_svd<T: Scalar>(s: &Svd<T>) -> T {
    let r = s.rank();
    if r == 0 || r < s.sigma.len() {
        T::infinity()
    } else {
        s.largest() / s.sigma[r - 1]
    }
}
