//! Choosing the Tikhonov parameter α from the noise levels: discrepancy
//! principle, generalized discrepancy principle and the power rule
//! `α = (h + δ)^(1/p)`.

use crate::error::{dim_check, Error, Result};
use crate::matrix::{dot, Matrix, Vector};
use crate::scalar::Scalar;
use crate::svd::{svd, Svd};

/// Search bracket in log10(α).
pub const LOG_ALPHA_MIN: f64 = -16.0;
pub const LOG_ALPHA_MAX: f64 = 16.0;
pub const MAX_BISECTIONS: usize = 200;

/// Perturbed operator and data with bounds `‖A − A_h‖ ≤ h`, `‖f − f_δ‖ ≤ δ`.
#[derive(Clone, Debug)]
pub struct NoisyProblem<T> {
    pub a_h: Matrix<T>,
    pub f_delta: Vector<T>,
    pub h: T,
    pub delta: T,
}

impl<T: Scalar> NoisyProblem<T> {
    pub fn new(a_h: Matrix<T>, f_delta: Vector<T>, h: T, delta: T) -> Result<Self> {
        dim_check(a_h.n_rows() == f_delta.len(), || {
            format!("data has length {}, operator has {} rows", f_delta.len(), a_h.n_rows())
        })?;
        let ok = |x: T| x >= T::zero() && x.is_finite();
        if !(ok(h) && ok(delta)) {
            return Err(Error::InvalidConfig(
                "noise levels must be finite and non-negative".into(),
            ));
        }
        Ok(NoisyProblem { a_h, f_delta, h, delta })
    }

    /// Noise-free problem (`h = δ = 0`).
    pub fn exact(a: Matrix<T>, f: Vector<T>) -> Result<Self> {
        Self::new(a, f, T::zero(), T::zero())
    }
}

#[derive(Clone, Debug)]
pub struct AlphaSearchResult<T> {
    pub alpha: T,
    /// Signed residual of the defining equation at `alpha`.
    pub discrepancy_gap: T,
    pub iterations: usize,
    /// Every α evaluated, in order.
    pub trajectory: Vec<T>,
}

/// Residual and solution norms of the Tikhonov family (`q0 = 0`) as cheap
/// functions of α, from one SVD.
pub(crate) struct TikhonovCurve<T> {
    sigma: Vec<T>,
    /// `(Uᵀf)_p` for p < min(K, N)
    beta: Vec<T>,
    /// squared norm of the part of f outside range(U[:, :min])
    tail_sq: T,
}

impl<T: Scalar> TikhonovCurve<T> {
    pub(crate) fn new(s: &Svd<T>, f: &[T]) -> Self {
        let k = s.u.n_rows();
        let r = s.sigma.len();
        let all: Vec<T> = (0..k).map(|p| dot(&s.u.column(p), f)).collect();
        let tail_sq = all[r..].iter().fold(T::zero(), |acc, &b| acc + b * b);
        TikhonovCurve {
            sigma: s.sigma.to_vec(),
            beta: all[..r].to_vec(),
            tail_sq,
        }
    }

    pub(crate) fn residual(&self, alpha: T) -> T {
        let ss = self.sigma.iter().zip(&self.beta).fold(self.tail_sq, |acc, (&s, &b)| {
            let r = alpha / (s * s + alpha) * b;
            acc + r * r
        });
        ss.sqrt()
    }

    pub(crate) fn solution_norm(&self, alpha: T) -> T {
        self.sigma
            .iter()
            .zip(&self.beta)
            .fold(T::zero(), |acc, (&s, &b)| {
                let c = s / (s * s + alpha) * b;
                acc + c * c
            })
            .sqrt()
    }

    /// `‖A·A†·f − f‖` with the default rank threshold.
    pub(crate) fn min_residual(&self, thr: T) -> T {
        self.sigma
            .iter()
            .zip(&self.beta)
            .filter(|(&s, _)| !(s > thr))
            .fold(self.tail_sq, |acc, (_, &b)| acc + b * b)
            .sqrt()
    }
}

enum Bracket<T> {
    Root(AlphaSearchResult<T>),
    BelowRoot,
    AboveRoot,
}

/// Bisection on log10(α) for an increasing gap function.
fn bisect<T: Scalar>(gap: impl Fn(T) -> T, tol: T) -> Result<Bracket<T>> {
    let ten = T::lit(10.0);
    let mut lo = T::lit(LOG_ALPHA_MIN);
    let mut hi = T::lit(LOG_ALPHA_MAX);
    let mut trajectory = Vec::new();
    let eval = |x: T, traj: &mut Vec<T>| {
        let alpha = ten.powf(x);
        traj.push(alpha);
        (alpha, gap(alpha))
    };
    let (a_lo, g_lo) = eval(lo, &mut trajectory);
    if g_lo.abs() <= tol {
        return Ok(Bracket::Root(AlphaSearchResult {
            alpha: a_lo,
            discrepancy_gap: g_lo,
            iterations: 0,
            trajectory,
        }));
    }
    if g_lo > T::zero() {
        return Ok(Bracket::BelowRoot);
    }
    let (a_hi, g_hi) = eval(hi, &mut trajectory);
    if g_hi.abs() <= tol {
        return Ok(Bracket::Root(AlphaSearchResult {
            alpha: a_hi,
            discrepancy_gap: g_hi,
            iterations: 0,
            trajectory,
        }));
    }
    if g_hi < T::zero() {
        return Ok(Bracket::AboveRoot);
    }
    for it in 1..=MAX_BISECTIONS {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let (alpha, g) = eval(mid, &mut trajectory);
        if g.abs() <= tol {
            return Ok(Bracket::Root(AlphaSearchResult {
                alpha,
                discrepancy_gap: g,
                iterations: it,
                trajectory,
            }));
        }
        if g < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_BISECTIONS,
    })
}

fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_tol<T: Scalar>(tol: T) -> Result<()> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")))
    }
}

/// α solving `‖A·q^α − f_δ‖ = δ` for the Tikhonov family with `q0 = 0`.
/// `tol` defaults to `1e-10·‖f_δ‖`.
pub fn discrepancy_alpha<T: Scalar>(
    a: &Matrix<T>,
    f_delta: &[T],
    delta: T,
    tol: Option<T>,
) -> Result<AlphaSearchResult<T>> {
    dim_check(f_delta.len() == a.n_rows(), || {
        format!("data has length {}, operator has {} rows", f_delta.len(), a.n_rows())
    })?;
    let f_norm = crate::matrix::norm2(f_delta);
    let tol = tol.unwrap_or(T::lit(1e-10) * f_norm);
    check_tol(tol)?;
    if delta >= f_norm {
        return Err(Error::DeltaTooLarge {
            delta: to_f64(delta),
            f_norm: to_f64(f_norm),
        });
    }
    let s = svd(a)?;
    let curve = TikhonovCurve::new(&s, f_delta);
    let r_min = if a.is_zero() {
        f_norm
    } else {
        curve.min_residual(s.default_tol())
    };
    if delta <= r_min + tol {
        return Err(Error::DeltaTooSmall {
            delta: to_f64(delta),
            r_min: to_f64(r_min),
        });
    }
    match bisect(|alpha| curve.residual(alpha) - delta, tol)? {
        Bracket::Root(r) => Ok(r),
        // root lies below the smallest admissible α
        Bracket::BelowRoot => Err(Error::DeltaTooSmall {
            delta: to_f64(delta),
            r_min: to_f64(r_min),
        }),
        Bracket::AboveRoot => Err(Error::DeltaTooLarge {
            delta: to_f64(delta),
            f_norm: to_f64(f_norm),
        }),
    }
}

/// α solving `‖A_h·q^α − f_δ‖ = h·‖q^α‖ + δ` for the Tikhonov family with
/// `q0 = 0`. `tol` defaults to `1e-10·‖f_δ‖`.
pub fn generalized_discrepancy_alpha<T: Scalar>(p: &NoisyProblem<T>, tol: Option<T>) -> Result<AlphaSearchResult<T>> {
    let f_norm = p.f_delta.norm();
    let tol = tol.unwrap_or(T::lit(1e-10) * f_norm);
    check_tol(tol)?;
    if p.delta >= f_norm {
        return Err(Error::NoSignChange);
    }
    let s = svd(&p.a_h)?;
    let curve = TikhonovCurve::new(&s, &p.f_delta);
    let gap = |alpha: T| curve.residual(alpha) - p.h * curve.solution_norm(alpha) - p.delta;
    match bisect(gap, tol)? {
        Bracket::Root(r) => Ok(r),
        Bracket::BelowRoot | Bracket::AboveRoot => Err(Error::NoSignChange),
    }
}

/// `α = (h + δ)^(1/p)` for `p > 1`.
pub fn apriori_alpha_rule<T: Scalar>(p: &NoisyProblem<T>, exponent_p: T) -> Result<T> {
    if !(exponent_p > T::one() && exponent_p.is_finite()) {
        return Err(Error::BadExponent(to_f64(exponent_p)));
    }
    let noise = p.h + p.delta;
    if noise <= T::zero() {
        return Err(Error::ZeroNoise);
    }
    Ok(noise.powf(T::one() / exponent_p))
}
