//! Moore–Penrose pseudo-inverse, (normal) pseudo-solutions and the
//! analysis of which rotated combinations of the unknowns are identifiable.

use crate::error::{dim_check, Error, Result};
use crate::matrix::{dot, Matrix, Vector};
use crate::scalar::Scalar;
use crate::svd::{svd, Svd};

#[derive(Clone, Debug)]
pub struct PseudoSolveResult<T> {
    pub q: Vector<T>,
    /// `‖A·q − f‖`
    pub residual_norm: T,
    pub solution_norm: T,
    /// Singular values inverted.
    pub rank_used: usize,
}

/// Singular spectrum and rotated-basis coordinates `(Vᵀq)_j = (Uᵀf)_j / σ_j`.
#[derive(Clone, Debug)]
pub struct CombinationReport<T> {
    /// Count of singular values above the default rank tolerance.
    pub rho: usize,
    /// Count of those above the caller's noise floor.
    pub k0: usize,
    pub sigma: Vector<T>,
    /// One value per `j < rho`, in non-increasing σ order.
    pub combination_values: Vec<T>,
}

fn threshold<T: Scalar>(s: &Svd<T>, rtol: Option<T>) -> T {
    match rtol {
        Some(r) => r * s.largest(),
        None => s.default_tol(),
    }
}

fn check_rhs<T: Scalar>(a: &Matrix<T>, f: &[T]) -> Result<()> {
    dim_check(f.len() == a.n_rows(), || {
        format!("right-hand side has length {}, matrix has {} rows", f.len(), a.n_rows())
    })
}

pub(crate) fn pinv_from_svd<T: Scalar>(s: &Svd<T>, thr: T) -> Matrix<T> {
    let (k, n) = (s.u.n_rows(), s.v.n_rows());
    let mut data = vec![T::zero(); n * k];
    for (p, &sg) in s.sigma.iter().enumerate() {
        if !(sg > thr) {
            continue;
        }
        let inv = T::one() / sg;
        for i in 0..n {
            let vi = s.v.get(i, p) * inv;
            for j in 0..k {
                data[i * k + j] = data[i * k + j] + vi * s.u.get(j, p);
            }
        }
    }
    Matrix::from_vec_unchecked(n, k, data)
}

/// `V·Σ†·Uᵀ`, inverting singular values above `rtol·σ₀`. With `rtol = None`
/// the numerical-rank tolerance `max(K,N)·ε·σ₀` is used.
pub fn pinv<T: Scalar>(a: &Matrix<T>, rtol: Option<T>) -> Result<Matrix<T>> {
    if a.is_zero() {
        return Ok(Matrix::zeros(a.n_cols(), a.n_rows()));
    }
    let s = svd(a)?;
    Ok(pinv_from_svd(&s, threshold(&s, rtol)))
}

/// `Σ_{σ_j > thr} v_j (u_jᵀ f) / σ_j` and the number of terms used.
pub(crate) fn apply_pinv<T: Scalar>(s: &Svd<T>, f: &[T], thr: T) -> (Vector<T>, usize) {
    let n = s.v.n_rows();
    let mut q = vec![T::zero(); n];
    let mut used = 0;
    for (p, &sg) in s.sigma.iter().enumerate() {
        if !(sg > thr) {
            continue;
        }
        used += 1;
        let c = dot(&s.u.column(p), f) / sg;
        for (i, qi) in q.iter_mut().enumerate() {
            *qi = *qi + c * s.v.get(i, p);
        }
    }
    (Vector::from_vec_unchecked(q), used)
}

fn finish<T: Scalar>(a: &Matrix<T>, f: &[T], q: Vector<T>, rank_used: usize) -> Result<PseudoSolveResult<T>> {
    let r = a.matvec(&q)?.sub(&Vector::from_vec_unchecked(f.to_vec()));
    Ok(PseudoSolveResult {
        residual_norm: r.norm(),
        solution_norm: q.norm(),
        q,
        rank_used,
    })
}

/// The normal pseudo-solution: the minimum-norm minimizer of `‖A·q − f‖`.
pub fn pseudo_solution<T: Scalar>(a: &Matrix<T>, f: &[T]) -> Result<PseudoSolveResult<T>> {
    check_rhs(a, f)?;
    if a.is_zero() {
        return finish(a, f, Vector::zeros(a.n_cols()), 0);
    }
    let s = svd(a)?;
    let (q, used) = apply_pinv(&s, f, s.default_tol());
    finish(a, f, q, used)
}

/// The residual minimizer closest to `q0`: `A†f + (I − A†A)·q0`.
pub fn normal_pseudo_solution_rel<T: Scalar>(a: &Matrix<T>, f: &[T], q0: &[T]) -> Result<PseudoSolveResult<T>> {
    check_rhs(a, f)?;
    dim_check(q0.len() == a.n_cols(), || {
        format!("q0 has length {}, matrix has {} columns", q0.len(), a.n_cols())
    })?;
    if a.is_zero() {
        return finish(a, f, Vector::from_vec_unchecked(q0.to_vec()), 0);
    }
    let s = svd(a)?;
    let thr = s.default_tol();
    let (base, used) = apply_pinv(&s, f, thr);
    // subtract the row-space component of q0
    let mut q = q0.to_vec();
    for (p, &sg) in s.sigma.iter().enumerate() {
        if !(sg > thr) {
            continue;
        }
        let vp = s.v.column(p);
        let c = dot(&vp, q0);
        for (qi, &v) in q.iter_mut().zip(vp.iter()) {
            *qi = *qi - c * v;
        }
    }
    let q = base.add(&Vector::from_vec_unchecked(q));
    finish(a, f, q, used)
}

/// `(AᵀA, Aᵀf)`.
pub fn normal_equations<T: Scalar>(a: &Matrix<T>, f: &[T]) -> Result<(Matrix<T>, Vector<T>)> {
    check_rhs(a, f)?;
    let at = a.transpose();
    Ok((at.matmul(a)?, a.tr_matvec(f)?))
}

pub fn identifiable_combinations<T: Scalar>(a: &Matrix<T>, f: &[T], noise_floor: T) -> Result<CombinationReport<T>> {
    check_rhs(a, f)?;
    if !(noise_floor >= T::zero()) {
        return Err(Error::InvalidConfig(format!(
            "noise floor must be non-negative, got {noise_floor}"
        )));
    }
    let s = svd(a)?;
    let rho = if a.is_zero() { 0 } else { s.rank() };
    let combination_values: Vec<T> = (0..rho).map(|j| dot(&s.u.column(j), f) / s.sigma[j]).collect();
    let k0 = (0..rho).filter(|&j| s.sigma[j] > noise_floor).count();
    Ok(CombinationReport {
        rho,
        k0,
        sigma: s.sigma,
        combination_values,
    })
}
