//! Closed-form regularized solvers and the a-priori error-bound shapes used
//! to pick α from the noise order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense;
use crate::error::{dim_check, Error, Result};
use crate::matrix::{dot, Matrix, Vector};
use crate::scalar::Scalar;
use crate::svd::{svd, Svd};

#[derive(Clone, Debug)]
pub struct RegularizedSolution<T> {
    pub q: Vector<T>,
    pub alpha: T,
    pub residual_norm: T,
    pub solution_norm: T,
}

impl<T: Scalar> RegularizedSolution<T> {
    fn new(a: &Matrix<T>, f: &[T], q: Vector<T>, alpha: T) -> Result<Self> {
        let r = a.matvec(&q)?.sub(&Vector::from_vec_unchecked(f.to_vec()));
        Ok(RegularizedSolution {
            residual_norm: r.norm(),
            solution_norm: q.norm(),
            q,
            alpha,
        })
    }
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha.to_f64().unwrap_or(f64::NAN)))
    }
}

fn check_system<T: Scalar>(a: &Matrix<T>, f: &[T], q0: Option<&[T]>) -> Result<()> {
    dim_check(f.len() == a.n_rows(), || {
        format!("right-hand side has length {}, matrix has {} rows", f.len(), a.n_rows())
    })?;
    if let Some(q0) = q0 {
        dim_check(q0.len() == a.n_cols(), || {
            format!("q0 has length {}, matrix has {} columns", q0.len(), a.n_cols())
        })?;
    }
    Ok(())
}

/// Tikhonov solution from a precomputed SVD of `a`, via the filter factors
/// `σ/(σ²+α)` on the data and `α/(σ²+α)` on the shift vector.
pub fn tikhonov_svd<T: Scalar>(s: &Svd<T>, f: &[T], alpha: T, q0: Option<&[T]>) -> Vector<T> {
    let n = s.v.n_rows();
    let mut q = vec![T::zero(); n];
    for p in 0..n {
        let sg = if p < s.sigma.len() { s.sigma[p] } else { T::zero() };
        let denom = sg * sg + alpha;
        let mut c = T::zero();
        if sg > T::zero() {
            c = sg * dot(&s.u.column(p), f) / denom;
        }
        if let Some(q0) = q0 {
            let vp = s.v.column(p);
            c = c + alpha * dot(&vp, q0) / denom;
        }
        if c == T::zero() {
            continue;
        }
        for (i, qi) in q.iter_mut().enumerate() {
            *qi = *qi + c * s.v.get(i, p);
        }
    }
    Vector::from_vec_unchecked(q)
}

/// Solves `(AᵀA + αI)·q = Aᵀf + α·q0`, the minimizer of
/// `‖Aq − f‖² + α‖q − q0‖²`.
pub fn tikhonov<T: Scalar>(a: &Matrix<T>, f: &[T], alpha: T, q0: Option<&[T]>) -> Result<RegularizedSolution<T>> {
    check_alpha(alpha)?;
    check_system(a, f, q0)?;
    let s = svd(a)?;
    RegularizedSolution::new(a, f, tikhonov_svd(&s, f, alpha, q0), alpha)
}

/// Smallest eigenvalue of a symmetric matrix. The shift by `‖S‖` makes the
/// matrix positive semi-definite, so its singular values are its eigenvalues.
fn min_eigenvalue<T: Scalar>(sym: &Matrix<T>, norm: T) -> Result<T> {
    let shifted = sym.add(&Matrix::identity(sym.n_rows()).scale(norm))?;
    let s = svd(&shifted)?;
    Ok(s.sigma[s.sigma.len() - 1] - norm)
}

pub(crate) fn check_symmetric_psd<T: Scalar>(a: &Matrix<T>) -> Result<()> {
    if !a.is_square() || !a.is_symmetric(T::lit(1e-10)) {
        return Err(Error::NotSymmetric);
    }
    let sym = a.add(&a.transpose())?.scale(T::lit(0.5));
    let norm = crate::svd::spectral_norm(&sym)?;
    if norm == T::zero() {
        return Ok(());
    }
    let slack = T::tol_floor(1e-10, 64.0) * norm;
    if min_eigenvalue(&sym, norm)? < -slack {
        return Err(Error::NotPsd);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n = a.n_rows();
    for _ in 0..32 {
        let x: Vec<T> = (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
        let ax = a.matvec(&x)?;
        if dot(&x, &ax) < -slack * dot(&x, &x) {
            return Err(Error::NotPsd);
        }
    }
    Ok(())
}

/// Solves `(A + αI)·q = f + α·q0` for symmetric positive semi-definite `A`.
pub fn lavrentiev<T: Scalar>(a: &Matrix<T>, f: &[T], alpha: T, q0: Option<&[T]>) -> Result<RegularizedSolution<T>> {
    check_alpha(alpha)?;
    check_system(a, f, q0)?;
    check_symmetric_psd(a)?;
    let m = a.add(&Matrix::identity(a.n_rows()).scale(alpha))?;
    let rhs: Vec<T> = match q0 {
        Some(q0) => f.iter().zip(q0).map(|(&fi, &qi)| fi + alpha * qi).collect(),
        None => f.to_vec(),
    };
    let q = dense::solve(&m, &rhs)?;
    RegularizedSolution::new(a, f, q, alpha)
}

/// Minimizer of `‖Aq − f‖² + α‖L(q − q0)‖²` for square invertible `L`.
pub fn tikhonov_general<T: Scalar>(
    a: &Matrix<T>,
    f: &[T],
    alpha: T,
    l: &Matrix<T>,
    q0: Option<&[T]>,
) -> Result<RegularizedSolution<T>> {
    check_alpha(alpha)?;
    check_system(a, f, q0)?;
    let n = a.n_cols();
    dim_check(l.shape() == (n, n), || {
        format!("stabilizer must be {n}x{n}, got {:?}", l.shape())
    })?;
    if l.is_zero() || svd(l)?.rank() < n {
        return Err(Error::SingularL);
    }
    let ltl = l.transpose().matmul(l)?;
    let m = a.transpose().matmul(a)?.add(&ltl.scale(alpha))?;
    let mut rhs = a.tr_matvec(f)?;
    if let Some(q0) = q0 {
        rhs = rhs.add(&ltl.matvec(q0)?.scale(alpha));
    }
    let q = dense::solve(&m, &rhs)?;
    RegularizedSolution::new(a, f, q, alpha)
}

/// Solves `(A + αB)·q = f` for a caller-supplied shift matrix `B`.
pub fn shifted_b<T: Scalar>(a: &Matrix<T>, f: &[T], alpha: T, b: &Matrix<T>) -> Result<RegularizedSolution<T>> {
    if alpha == T::zero() || !alpha.is_finite() {
        return Err(Error::BadAlpha(alpha.to_f64().unwrap_or(f64::NAN)));
    }
    check_system(a, f, None)?;
    dim_check(a.is_square() && b.shape() == a.shape(), || {
        format!("A {:?} and B {:?} must be square of equal size", a.shape(), b.shape())
    })?;
    let m = a.add(&b.scale(alpha))?;
    let q = dense::solve(&m, f).map_err(|e| match e {
        Error::Singular => Error::SingularShift,
        other => other,
    })?;
    RegularizedSolution::new(a, f, q, alpha)
}

/// `ε^(2/3)` when the exact system is solvable, `ε^(1/2)` otherwise.
pub fn apriori_alpha<T: Scalar>(epsilon: T, exact_system_solvable: bool) -> Result<T> {
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::BadEpsilon(epsilon.to_f64().unwrap_or(f64::NAN)));
    }
    let p = if exact_system_solvable {
        T::lit(2.0) / T::lit(3.0)
    } else {
        T::lit(0.5)
    };
    Ok(epsilon.powf(p))
}

/// Constants of the a-priori error bound together with the common noise
/// order ε of `h` and `δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorBoundModel<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub epsilon: T,
}

impl<T: Scalar> ErrorBoundModel<T> {
    /// Unit constants.
    pub fn new(epsilon: T) -> Result<Self> {
        Self::with_constants(T::one(), T::one(), T::one(), epsilon)
    }

    pub fn with_constants(c1: T, c2: T, c3: T, epsilon: T) -> Result<Self> {
        let ok = |x: T| x > T::zero() && x.is_finite();
        if !(ok(c1) && ok(c2) && ok(c3)) {
            return Err(Error::InvalidConfig(
                "bound constants must be finite and positive".into(),
            ));
        }
        if !ok(epsilon) {
            return Err(Error::BadEpsilon(epsilon.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(ErrorBoundModel { c1, c2, c3, epsilon })
    }
}

/// `c1·α + c2·ε + c3·ε/√α`, the bound shape for a solvable exact system.
pub fn bound_phi<T: Scalar>(model: &ErrorBoundModel<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let e = model.epsilon;
    Ok(model.c1 * alpha + model.c2 * e + model.c3 * e / alpha.sqrt())
}

/// `c1·α + c2·ε/α + c3·ε/√α`, the bound shape for an unsolvable exact system.
pub fn bound_psi<T: Scalar>(model: &ErrorBoundModel<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let e = model.epsilon;
    Ok(model.c1 * alpha + model.c2 * e / alpha + model.c3 * e / alpha.sqrt())
}
