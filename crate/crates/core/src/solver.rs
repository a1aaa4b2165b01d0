//! Uniform dispatch over every solver, producing a [`SolveReport`].

use crate::error::{Error, Result};
use crate::iterative::{gd_train, landweber, GdConfig, StopRule};
use crate::matrix::{Matrix, Vector};
use crate::param_select::NoisyProblem;
use crate::pseudo::pseudo_solution;
use crate::regularizers::{lavrentiev, tikhonov};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub enum Method<T> {
    Pseudo,
    Tikhonov {
        alpha: T,
        q0: Option<Vector<T>>,
    },
    Lavrentiev {
        alpha: T,
        q0: Option<Vector<T>>,
    },
    /// Without a rule the last of `max_iter` iterates is returned.
    Landweber {
        h: T,
        delta: T,
        rule: Option<StopRule<T>>,
        max_iter: usize,
        q0: Option<Vector<T>>,
    },
    Gd {
        config: GdConfig<T>,
        q0: Option<Vector<T>>,
    },
}

impl<T: Scalar> Method<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Pseudo => "pseudo",
            Method::Tikhonov { .. } => "tikhonov",
            Method::Lavrentiev { .. } => "lavrentiev",
            Method::Landweber { .. } => "landweber",
            Method::Gd { .. } => "gd",
        }
    }

    /// Short human-readable description including the parameters.
    pub fn tag(&self) -> String {
        match self {
            Method::Pseudo => "pseudo".into(),
            Method::Tikhonov { alpha, .. } => format!("tikhonov(alpha={alpha:e})"),
            Method::Lavrentiev { alpha, .. } => format!("lavrentiev(alpha={alpha:e})"),
            Method::Landweber { rule, max_iter, .. } => match rule {
                None => format!("landweber(n={max_iter})"),
                Some(StopRule::StepNorm { .. }) => "landweber(rule=1)".into(),
                Some(StopRule::Residual { .. }) => "landweber(rule=2)".into(),
                Some(StopRule::Combined { .. }) => "landweber(rule=3)".into(),
            },
            Method::Gd { config, .. } => format!(
                "gd(lr={:e},epochs={},l1={:e},l2={:e})",
                config.learning_rate, config.max_epochs, config.l1_alpha, config.l2_alpha
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport<T> {
    pub q: Vector<T>,
    pub method: String,
    pub alpha: Option<T>,
    pub stop_index: Option<usize>,
    pub residual_norm: T,
    pub solution_norm: T,
}

fn residual<T: Scalar>(a: &Matrix<T>, f: &[T], q: &Vector<T>) -> Result<T> {
    Ok(a.matvec(q)?.sub(&Vector::from_vec_unchecked(f.to_vec())).norm())
}

/// Solves `a·q ≈ f` with the chosen method.
pub fn solve<T: Scalar>(a: &Matrix<T>, f: &[T], method: &Method<T>) -> Result<SolveReport<T>> {
    let zeros = || vec![T::zero(); a.n_cols()];
    let report = |q: Vector<T>, alpha: Option<T>, stop_index: Option<usize>| -> Result<SolveReport<T>> {
        Ok(SolveReport {
            residual_norm: residual(a, f, &q)?,
            solution_norm: q.norm(),
            q,
            method: method.name().to_string(),
            alpha,
            stop_index,
        })
    };
    match method {
        Method::Pseudo => {
            let r = pseudo_solution(a, f)?;
            report(r.q, None, None)
        }
        Method::Tikhonov { alpha, q0 } => {
            let r = tikhonov(a, f, *alpha, q0.as_deref())?;
            report(r.q, Some(*alpha), None)
        }
        Method::Lavrentiev { alpha, q0 } => {
            let r = lavrentiev(a, f, *alpha, q0.as_deref())?;
            report(r.q, Some(*alpha), None)
        }
        Method::Landweber {
            h,
            delta,
            rule,
            max_iter,
            q0,
        } => {
            let p = NoisyProblem::new(a.clone(), Vector::new(f.to_vec())?, *h, *delta)?;
            let start = q0.as_ref().map_or_else(zeros, |q| q.to_vec());
            let trace = landweber(&p, &start, *max_iter)?;
            let n = match rule {
                Some(rule) => rule.apply(&p, &trace)?.stop_index,
                None => trace.last_index(),
            };
            report(trace.iterates[n].clone(), None, Some(n))
        }
        Method::Gd { config, q0 } => {
            let start = q0.as_ref().map_or_else(zeros, |q| q.to_vec());
            let trace = gd_train(a, f, config, &start)?;
            let n = trace.last_index();
            let q = trace.iterates.into_iter().last().ok_or(Error::Empty)?;
            report(q, None, Some(n))
        }
    }
}
