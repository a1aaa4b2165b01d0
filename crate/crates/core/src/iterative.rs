//! Iterative regularization: the Landweber scheme with its three stopping
//! rules, and penalized gradient descent with L1/L2 terms and early stopping.
//!
//! Landweber requires `‖A_h‖ ≤ 1`. When the operator is larger, [`landweber`]
//! divides both `A_h` and `f_δ` by the spectral norm and records the factor
//! in the trace; the stopping rules scale `h` and `δ` by the same factor, so
//! every inequality is evaluated consistently on the scaled system.

use crate::error::{dim_check, Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::param_select::NoisyProblem;
use crate::scalar::Scalar;
use crate::svd::spectral_norm;

#[derive(Clone, Debug)]
pub struct IterationTrace<T> {
    /// `q_0, q_1, …`
    pub iterates: Vec<Vector<T>>,
    /// `‖A q_n − f‖` on the (possibly scaled) system, one per iterate.
    pub residual_norms: Vec<T>,
    /// `‖q_n − q_{n−1}‖` for `n ≥ 1`; entry `n − 1` belongs to iterate `n`.
    pub step_norms: Vec<T>,
    /// Factor the system was multiplied by; 1 when no rescaling happened.
    pub scale_factor: T,
    /// Validation residuals at each early-stopping check (gradient descent only).
    pub validation_residuals: Vec<T>,
}

impl<T: Scalar> IterationTrace<T> {
    fn start(q0: Vector<T>, residual: T, scale_factor: T) -> Self {
        IterationTrace {
            iterates: vec![q0],
            residual_norms: vec![residual],
            step_norms: Vec::new(),
            scale_factor,
            validation_residuals: Vec::new(),
        }
    }

    fn push(&mut self, q: Vector<T>, residual: T) {
        let prev = self.iterates.last().expect("trace is never empty");
        self.step_norms.push(q.distance(prev));
        self.iterates.push(q);
        self.residual_norms.push(residual);
    }

    /// Index of the last iterate.
    pub fn last_index(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn last(&self) -> &Vector<T> {
        self.iterates.last().expect("trace is never empty")
    }

    /// `‖q_n − q_{n−1}‖`, defined for `n ≥ 1`.
    pub fn step_norm(&self, n: usize) -> Option<T> {
        n.checked_sub(1).and_then(|i| self.step_norms.get(i).copied())
    }

    fn truncate(&mut self, n: usize) {
        self.iterates.truncate(n + 1);
        self.residual_norms.truncate(n + 1);
        self.step_norms.truncate(n);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopRuleKind {
    Rule1,
    Rule2,
    Rule3,
}

/// Which inequality fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopCondition {
    StepNorm,
    Residual,
    IterationCount,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StopDecision {
    pub rule: StopRuleKind,
    pub stop_index: usize,
    pub triggered_condition: StopCondition,
}

/// Stopping rule together with its constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopRule<T> {
    /// `‖q_n − q_{n−1}‖ ≤ a1·h + a2·δ`
    StepNorm { a1: T, a2: T },
    /// `‖A_h q_n − f_δ‖ ≤ a0·h + a1·δ`; `a0` must bound the norm of the
    /// normal solution, which is the caller's responsibility.
    Residual { a0: T, a1: T },
    /// `‖A_h q_n − f_δ‖ ≤ a1‖q_n‖h + a2δ` or `n ≥ a / (a1‖q_n‖h + a2δ)²`
    Combined { a: T, a1: T, a2: T },
}

impl<T: Scalar> StopRule<T> {
    pub fn apply(&self, p: &NoisyProblem<T>, trace: &IterationTrace<T>) -> Result<StopDecision> {
        match *self {
            StopRule::StepNorm { a1, a2 } => stop_rule_1(trace, p.h, p.delta, a1, a2),
            StopRule::Residual { a0, a1 } => stop_rule_2(p, trace, a0, a1),
            StopRule::Combined { a, a1, a2 } => stop_rule_3(p, trace, a, a1, a2),
        }
    }
}

/// Landweber iteration `q_{n+1} = q_n + A_hᵀ(f_δ − A_h q_n)`, run for
/// `max_iter` steps after rescaling to `‖A_h‖ ≤ 1` if needed.
pub fn landweber<T: Scalar>(p: &NoisyProblem<T>, q0: &[T], max_iter: usize) -> Result<IterationTrace<T>> {
    if max_iter == 0 {
        return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
    }
    dim_check(q0.len() == p.a_h.n_cols(), || {
        format!("q0 has length {}, operator has {} columns", q0.len(), p.a_h.n_cols())
    })?;
    let norm = spectral_norm(&p.a_h)?;
    let scale = if norm > T::one() { T::one() / norm } else { T::one() };
    let (a, f) = if scale == T::one() {
        (p.a_h.clone(), p.f_delta.clone())
    } else {
        (p.a_h.scale(scale), p.f_delta.scale(scale))
    };

    let mut q = Vector::from_vec_unchecked(q0.to_vec());
    let mut r = f.sub(&a.matvec(&q)?);
    let mut trace = IterationTrace::start(q.clone(), r.norm(), scale);
    for _ in 0..max_iter {
        q = q.add(&a.tr_matvec(&r)?);
        r = f.sub(&a.matvec(&q)?);
        trace.push(q.clone(), r.norm());
    }
    Ok(trace)
}

/// First `n ≥ 1` with `‖q_n − q_{n−1}‖ ≤ a1·h + a2·δ`.
pub fn stop_rule_1<T: Scalar>(trace: &IterationTrace<T>, h: T, delta: T, a1: T, a2: T) -> Result<StopDecision> {
    if !(a1 > T::zero() && a2 > T::zero()) {
        return Err(Error::InvalidConfig("rule 1 needs a1 > 0 and a2 > 0".into()));
    }
    let s = trace.scale_factor;
    let threshold = a1 * h * s + a2 * delta * s;
    trace
        .step_norms
        .iter()
        .position(|&d| d <= threshold)
        .map(|i| StopDecision {
            rule: StopRuleKind::Rule1,
            stop_index: i + 1,
            triggered_condition: StopCondition::StepNorm,
        })
        .ok_or(Error::NeverTriggered {
            len: trace.iterates.len(),
        })
}

/// First `n ≥ 0` with `‖A_h q_n − f_δ‖ ≤ a0·h + a1·δ`.
pub fn stop_rule_2<T: Scalar>(p: &NoisyProblem<T>, trace: &IterationTrace<T>, a0: T, a1: T) -> Result<StopDecision> {
    if !(a1 > T::one() && a0 >= T::zero()) {
        return Err(Error::InvalidConfig("rule 2 needs a1 > 1 and a0 >= 0".into()));
    }
    let s = trace.scale_factor;
    let threshold = a0 * p.h * s + a1 * p.delta * s;
    trace
        .residual_norms
        .iter()
        .position(|&r| r <= threshold)
        .map(|n| StopDecision {
            rule: StopRuleKind::Rule2,
            stop_index: n,
            triggered_condition: StopCondition::Residual,
        })
        .ok_or(Error::NeverTriggered {
            len: trace.iterates.len(),
        })
}

/// First `n` with `‖A_h q_n − f_δ‖ ≤ t_n` or `n ≥ a / t_n²`, where
/// `t_n = a1·‖q_n‖·h + a2·δ`. When `t_n = 0` only the residual branch can fire;
/// if that holds for every iterate the failure is `DegenerateThreshold`.
pub fn stop_rule_3<T: Scalar>(
    p: &NoisyProblem<T>,
    trace: &IterationTrace<T>,
    a: T,
    a1: T,
    a2: T,
) -> Result<StopDecision> {
    if !(a > T::one() && a1 > T::one() && a2 > T::one()) {
        return Err(Error::InvalidConfig("rule 3 needs a, a1, a2 > 1".into()));
    }
    let s = trace.scale_factor;
    let mut degenerate = true;
    for (n, (q, &res)) in trace.iterates.iter().zip(&trace.residual_norms).enumerate() {
        let t = a1 * q.norm() * p.h * s + a2 * p.delta * s;
        let decision = |c| StopDecision {
            rule: StopRuleKind::Rule3,
            stop_index: n,
            triggered_condition: c,
        };
        if res <= t {
            return Ok(decision(StopCondition::Residual));
        }
        if t == T::zero() {
            continue;
        }
        degenerate = false;
        if T::from_usize_lossy(n) >= a / (t * t) {
            return Ok(decision(StopCondition::IterationCount));
        }
    }
    if degenerate {
        Err(Error::DegenerateThreshold)
    } else {
        Err(Error::NeverTriggered {
            len: trace.iterates.len(),
        })
    }
}

/// Where the validation pair for early stopping comes from.
#[derive(Clone, Debug)]
pub enum Validation<T> {
    /// Hold out the trailing `fraction` of the equations (rows of `A`, entries of `f`).
    Split(T),
    Explicit {
        a: Matrix<T>,
        f: Vector<T>,
    },
}

#[derive(Clone, Debug)]
pub struct EarlyStopping<T> {
    pub validation: Validation<T>,
    pub patience: usize,
    pub check_every: usize,
}

#[derive(Clone, Debug)]
pub struct GdConfig<T> {
    pub learning_rate: T,
    pub max_epochs: usize,
    /// weight of `‖q‖₁`
    pub l1_alpha: T,
    /// weight of `½‖q‖₂²`
    pub l2_alpha: T,
    pub early_stopping: Option<EarlyStopping<T>>,
}

impl<T: Scalar> GdConfig<T> {
    pub fn new(learning_rate: T, max_epochs: usize) -> Self {
        GdConfig {
            learning_rate,
            max_epochs,
            l1_alpha: T::zero(),
            l2_alpha: T::zero(),
            early_stopping: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if !(self.learning_rate > T::zero() && self.learning_rate.is_finite()) {
            return bad("learning rate must be positive");
        }
        if !(self.l1_alpha >= T::zero() && self.l2_alpha >= T::zero()) {
            return bad("penalty weights must be non-negative");
        }
        if let Some(es) = &self.early_stopping {
            if es.patience < 1 || es.check_every < 1 {
                return bad("patience and check_every must be at least 1");
            }
            if let Validation::Split(fr) = es.validation {
                if !(fr > T::zero() && fr < T::one()) {
                    return bad("validation fraction must lie in (0, 1)");
                }
            }
        }
        Ok(())
    }
}

fn soft_threshold<T: Scalar>(x: T, t: T) -> T {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        T::zero()
    }
}

type Split<T> = (Matrix<T>, Vector<T>, Matrix<T>, Vector<T>);

fn split_rows<T: Scalar>(a: &Matrix<T>, f: &Vector<T>, fraction: T) -> Result<Split<T>> {
    let k = a.n_rows();
    let held = (fraction * T::from_usize_lossy(k))
        .round()
        .to_usize()
        .unwrap_or(0)
        .max(1);
    if held >= k {
        return Err(Error::InvalidConfig(format!("cannot hold out {held} of {k} equations")));
    }
    let keep = k - held;
    let rows = a.to_rows();
    let train = Matrix::from_rows(&rows[..keep])?;
    let val = Matrix::from_rows(&rows[keep..])?;
    Ok((
        train,
        Vector::new(f[..keep].to_vec())?,
        val,
        Vector::new(f[keep..].to_vec())?,
    ))
}

/// Residual growth beyond this factor over the start is treated as divergence.
const DIVERGENCE_FACTOR: f64 = 1e6;

/// Proximal gradient descent on `‖Aq − f‖² + (l2/2)‖q‖₂² + l1‖q‖₁`:
/// a gradient step on the smooth part followed by soft-thresholding by
/// `lr·l1`. With early stopping the returned trace ends at the iterate with
/// the lowest validation residual.
pub fn gd_train<T: Scalar>(a: &Matrix<T>, f: &[T], config: &GdConfig<T>, q0: &[T]) -> Result<IterationTrace<T>> {
    config.validate()?;
    dim_check(f.len() == a.n_rows(), || {
        format!("data has length {}, operator has {} rows", f.len(), a.n_rows())
    })?;
    dim_check(q0.len() == a.n_cols(), || {
        format!("q0 has length {}, operator has {} columns", q0.len(), a.n_cols())
    })?;
    let f = Vector::new(f.to_vec())?;
    let (a_train, f_train, val) = match &config.early_stopping {
        None => (a.clone(), f, None),
        Some(es) => match &es.validation {
            Validation::Split(fr) => {
                let (at, ft, av, fv) = split_rows(a, &f, *fr)?;
                (at, ft, Some((av, fv, es)))
            }
            Validation::Explicit { a: av, f: fv } => {
                dim_check(av.n_cols() == a.n_cols() && av.n_rows() == fv.len(), || {
                    "validation pair does not match the operator".to_string()
                })?;
                (a.clone(), f, Some((av.clone(), fv.clone(), es)))
            }
        },
    };

    let sigma = spectral_norm(&a_train)?;
    let lr = config.learning_rate;
    if sigma > T::zero() && lr >= T::one() / (sigma * sigma) {
        log::warn!(
            "learning rate {lr} is not below 1/‖A‖² = {}; iteration may diverge",
            T::one() / (sigma * sigma)
        );
    }
    let two = T::lit(2.0);
    let shrink = lr * config.l1_alpha;

    let mut q = Vector::from_vec_unchecked(q0.to_vec());
    let mut r = a_train.matvec(&q)?.sub(&f_train);
    let r0 = r.norm();
    let limit = T::lit(DIVERGENCE_FACTOR) * r0;
    let mut trace = IterationTrace::start(q.clone(), r0, T::one());

    let val_residual =
        |q: &Vector<T>, av: &Matrix<T>, fv: &Vector<T>| -> Result<T> { Ok(av.matvec(q)?.sub(fv).norm()) };
    let mut checks: Vec<(usize, T)> = Vec::new();
    if let Some((av, fv, _)) = &val {
        checks.push((0, val_residual(&q, av, fv)?));
    }

    for epoch in 1..=config.max_epochs {
        let grad = a_train.tr_matvec(&r)?;
        let next: Vec<T> = q
            .iter()
            .zip(grad.iter())
            .map(|(&qi, &gi)| {
                let stepped = qi - lr * (two * gi + config.l2_alpha * qi);
                if shrink > T::zero() {
                    soft_threshold(stepped, shrink)
                } else {
                    stepped
                }
            })
            .collect();
        q = Vector::from_vec_unchecked(next);
        r = a_train.matvec(&q)?.sub(&f_train);
        let rn = r.norm();
        if !rn.is_finite() || !q.is_finite() || (r0 > T::zero() && rn > limit) {
            return Err(Error::DivergenceDetected { epoch });
        }
        trace.push(q.clone(), rn);

        if let Some((av, fv, es)) = &val {
            if epoch % es.check_every == 0 {
                checks.push((epoch, val_residual(&q, av, fv)?));
                let curve: Vec<T> = checks.iter().map(|c| c.1).collect();
                if let Some(best) = patience_exhausted(&curve, es.patience) {
                    trace.truncate(checks[best].0);
                    trace.validation_residuals = curve[..=best].to_vec();
                    return Ok(trace);
                }
            }
        }
    }
    if !checks.is_empty() {
        let curve: Vec<T> = checks.iter().map(|c| c.1).collect();
        let best = early_stop_monitor(&curve, 1.max(curve.len()));
        trace.truncate(checks[best].0);
        trace.validation_residuals = curve[..=best].to_vec();
    }
    Ok(trace)
}

/// Best index so far if the curve ends in `patience` consecutive
/// non-improving checks.
fn patience_exhausted<T: Scalar>(curve: &[T], patience: usize) -> Option<usize> {
    let mut best = 0;
    let mut stale = 0;
    for (i, &v) in curve.iter().enumerate().skip(1) {
        if v < curve[best] {
            best = i;
            stale = 0;
        } else {
            stale += 1;
            if stale >= patience {
                return Some(best);
            }
        }
    }
    None
}

/// Index of the iterate to restore: the first minimum of the validation
/// curve seen before `patience` consecutive checks fail to improve on it.
/// Without a trigger, the first minimum of the whole curve.
pub fn early_stop_monitor<T: Scalar>(validation_residuals: &[T], patience: usize) -> usize {
    let patience = patience.max(1);
    patience_exhausted(validation_residuals, patience).unwrap_or_else(|| {
        validation_residuals
            .iter()
            .enumerate()
            .fold(
                (0, T::infinity()),
                |best, (i, &v)| if v < best.1 { (i, v) } else { best },
            )
            .0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(rows: &[&[f64]], f: &[f64], h: f64, delta: f64) -> NoisyProblem<f64> {
        NoisyProblem::new(
            Matrix::from_f64_rows(rows).unwrap(),
            Vector::new(f.to_vec()).unwrap(),
            h,
            delta,
        )
        .unwrap()
    }

    #[test]
    fn landweber_fixed_points() {
        let p = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0], 0.0, 0.0);
        let t = landweber(&p, &[0.0, 0.0], 5).unwrap();
        assert_eq!(t.iterates.len(), 6);
        for q in &t.iterates[1..] {
            assert_eq!(q.as_slice(), &[1.0, 0.0]);
        }
        assert_eq!(t.step_norm(1), Some(1.0));
        assert_eq!(t.step_norm(2), Some(0.0));
        assert_eq!(t.step_norm(0), None);

        let p = problem(&[&[0.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0], 0.0, 0.0);
        let t = landweber(&p, &[0.5, -2.0], 3).unwrap();
        assert!(t.iterates.iter().all(|q| q.as_slice() == [0.5, -2.0]));

        let p = problem(&[&[1.0, 0.0], &[0.0, 1.0]], &[2.0, 3.0], 0.0, 0.0);
        let t = landweber(&p, &[0.0, 0.0], 3).unwrap();
        assert!(t.iterates[1..].iter().all(|q| q.as_slice() == [2.0, 3.0]));
        assert!(landweber(&p, &[0.0], 3).is_err());
    }

    #[test]
    fn landweber_rescales_large_operators() {
        let p = problem(&[&[4.0, 0.0], &[0.0, 2.0]], &[4.0, 2.0], 0.0, 0.0);
        let t = landweber(&p, &[0.0, 0.0], 200).unwrap();
        assert_eq!(t.scale_factor, 0.25);
        assert!(t.last().distance(&Vector::new(vec![1.0, 1.0]).unwrap()) < 1e-12);
        assert!(t.residual_norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn rule_1() {
        let p = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0], 0.0, 0.0);
        let t = landweber(&p, &[0.0, 0.0], 5).unwrap();
        let d = stop_rule_1(&t, 0.1, 0.1, 1.0, 1.0).unwrap();
        assert_eq!((d.stop_index, d.triggered_condition), (2, StopCondition::StepNorm));
        // first step norm 1 ≤ 2
        assert_eq!(stop_rule_1(&t, 1.0, 1.0, 1.0, 1.0).unwrap().stop_index, 1);
        assert!(stop_rule_1(&t, 0.0, 0.0, 0.0, 0.0).is_err());

        let p = problem(&[&[0.5]], &[1.0], 0.0, 0.0);
        let t = landweber(&p, &[0.0], 20).unwrap();
        assert!(t.step_norms.iter().all(|&s| s > 0.0));
        assert!(matches!(
            stop_rule_1(&t, 0.0, 0.0, 1.0, 1.0),
            Err(Error::NeverTriggered { .. })
        ));
    }

    #[test]
    fn rule_2() {
        let p = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 0.0], 0.0, 0.1);
        let t = landweber(&p, &[0.0, 0.0], 3).unwrap();
        assert_eq!(stop_rule_2(&p, &t, 1.0, 1.5).unwrap().stop_index, 1);

        let loose = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 0.0], 0.0, 1.0);
        assert_eq!(stop_rule_2(&loose, &t, 1.0, 1.5).unwrap().stop_index, 0);

        // exact data: zero threshold, reached since residual hits exactly 0
        let exact = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 0.0], 0.0, 0.0);
        assert_eq!(stop_rule_2(&exact, &t, 1.0, 1.5).unwrap().stop_index, 1);
        // inconsistent exact data never reaches zero residual
        let incons = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0], 0.0, 0.0);
        let t2 = landweber(&incons, &[0.0, 0.0], 3).unwrap();
        assert!(matches!(
            stop_rule_2(&incons, &t2, 1.0, 1.5),
            Err(Error::NeverTriggered { .. })
        ));
        assert!(stop_rule_2(&p, &t, 1.0, 1.0).is_err());
    }

    #[test]
    fn rule_3() {
        // residual branch threshold 0.2 with h = 0, δ = 0.1, a2 = 2
        let p = problem(&[&[0.5]], &[1.0], 0.0, 0.1);
        let t = landweber(&p, &[0.0], 50).unwrap();
        let d = stop_rule_3(&p, &t, 2.0, 2.0, 2.0).unwrap();
        let first = t.residual_norms.iter().position(|&r| r <= 0.2).unwrap();
        assert_eq!(d.stop_index, first);
        assert_eq!(d.triggered_condition, StopCondition::Residual);

        // count branch: residual stalls at 1 on an inconsistent system
        let p = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0], 0.0, 0.01);
        let t = landweber(&p, &[0.0, 0.0], 6000).unwrap();
        let d = stop_rule_3(&p, &t, 2.0, 2.0, 2.0).unwrap();
        assert_eq!(d.triggered_condition, StopCondition::IterationCount);
        assert_eq!(d.stop_index, (2.0f64 / (0.02 * 0.02)).ceil() as usize);

        let exact = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 1.0], 0.0, 0.0);
        let t = landweber(&exact, &[0.0, 0.0], 5).unwrap();
        assert_eq!(
            stop_rule_3(&exact, &t, 2.0, 2.0, 2.0).unwrap_err(),
            Error::DegenerateThreshold
        );
        let solvable = problem(&[&[1.0, 0.0], &[0.0, 0.0]], &[1.0, 0.0], 0.0, 0.0);
        let t = landweber(&solvable, &[0.0, 0.0], 5).unwrap();
        assert_eq!(stop_rule_3(&solvable, &t, 2.0, 2.0, 2.0).unwrap().stop_index, 1);
        assert!(stop_rule_3(&p, &t, 1.0, 2.0, 2.0).is_err());

        // zero threshold at q0 = 0 only, positive afterwards
        let op_only = problem(&[&[1.0, 0.0], &[0.0, 1e-4]], &[1.0, 1.0], 1e-4, 0.0);
        let t = landweber(&op_only, &[0.0, 0.0], 20).unwrap();
        assert_eq!(
            stop_rule_3(&op_only, &t, 2.0, 1.5, 1.5).unwrap_err(),
            Error::NeverTriggered { len: 21 }
        );
    }

    #[test]
    fn gd_ridge_and_lasso_limits() {
        let a = Matrix::<f64>::identity(2);
        let mut cfg = GdConfig::new(0.25, 2000);
        cfg.l2_alpha = 2.0;
        let t = gd_train(&a, &[2.0, 0.0], &cfg, &[0.0, 0.0]).unwrap();
        assert!(t.last().distance(&Vector::new(vec![1.0, 0.0]).unwrap()) < 1e-12);

        let a = Matrix::from_f64_rows(&[[1.0, 2.0], [0.5, -1.0], [2.0, 0.0]]).unwrap();
        let f = [1.0, 2.0, -1.0];
        let atf = a.tr_matvec(&f).unwrap();
        let mut cfg = GdConfig::new(0.05, 500);
        cfg.l1_alpha = 2.0 * atf.norm_inf() * 1.01;
        let t = gd_train(&a, &f, &cfg, &[0.0, 0.0]).unwrap();
        assert!(t.last().norm() == 0.0);
    }

    #[test]
    fn gd_detects_divergence() {
        let a = Matrix::<f64>::identity(2);
        let cfg = GdConfig::new(5.0, 100);
        assert!(matches!(
            gd_train(&a, &[1.0, 1.0], &cfg, &[0.0, 0.0]),
            Err(Error::DivergenceDetected { .. })
        ));
    }

    #[test]
    fn monitor_curves() {
        assert_eq!(early_stop_monitor(&[5.0, 4.0, 3.0, 2.0, 1.0], 2), 4);
        let v: Vec<f64> = (0..15).map(|i| ((i as f64) - 7.0).abs()).collect();
        assert_eq!(early_stop_monitor(&v, 3), 7);
        assert_eq!(early_stop_monitor(&[1.0; 6], 3), 0);
        assert_eq!(patience_exhausted(&[1.0; 6], 3), Some(0));
        assert_eq!(patience_exhausted(&[1.0; 3], 3), None);
    }

    #[test]
    fn gd_early_stopping_restores_best() {
        // training data pulls q toward 2, validation toward 1: validation error
        // falls, then rises once q passes 1
        let a = Matrix::from_f64_rows(&[[1.0]]).unwrap();
        let mut cfg = GdConfig::new(0.05, 500);
        cfg.early_stopping = Some(EarlyStopping {
            validation: Validation::Explicit {
                a: Matrix::from_f64_rows(&[[1.0]]).unwrap(),
                f: Vector::new(vec![1.0]).unwrap(),
            },
            patience: 3,
            check_every: 1,
        });
        let t = gd_train(&a, &[2.0], &cfg, &[0.0]).unwrap();
        let v = &t.validation_residuals;
        assert_eq!(t.iterates.len(), v.len());
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(*v.last().unwrap(), min);
        assert!((t.last()[0] - 1.0).abs() < 0.1);

        cfg.early_stopping.as_mut().unwrap().validation = Validation::Split(0.5);
        let a2 = Matrix::from_f64_rows(&[[1.0], [1.0]]).unwrap();
        let t = gd_train(&a2, &[2.0, 1.0], &cfg, &[0.0]).unwrap();
        assert!((t.last()[0] - 1.0).abs() < 0.1);
    }
}
