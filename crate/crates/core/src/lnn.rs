//! Linear neural networks `h = Q·g (+ b)`: assembling training pairs into
//! linear systems, recovering `Q` row by row, prediction and identifiability
//! diagnostics.

use crate::error::{dim_check, Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::pseudo::apply_pinv;
use crate::scalar::Scalar;
use crate::solver::{solve, Method, SolveReport};
use crate::svd::{condition_from_svd, svd};

/// Inputs `g^(k)` as the columns of `g` (N×K) and answers `h^(k)` as the
/// columns of `h` (M×K).
#[derive(Clone, Debug)]
pub struct TrainingSet<T> {
    pub g: Matrix<T>,
    pub h: Matrix<T>,
}

impl<T: Scalar> TrainingSet<T> {
    pub fn new(g: Matrix<T>, h: Matrix<T>) -> Result<Self> {
        dim_check(g.n_cols() == h.n_cols(), || {
            format!("inputs have {} columns, answers have {}", g.n_cols(), h.n_cols())
        })?;
        Ok(TrainingSet { g, h })
    }

    pub fn n_inputs(&self) -> usize {
        self.g.n_rows()
    }

    pub fn n_outputs(&self) -> usize {
        self.h.n_rows()
    }

    pub fn n_pairs(&self) -> usize {
        self.g.n_cols()
    }
}

#[derive(Clone, Debug)]
pub struct WeightModel<T> {
    /// M×N
    pub q: Matrix<T>,
    pub bias: Option<Vector<T>>,
    pub method_tag: String,
    pub per_row_reports: Vec<SolveReport<T>>,
}

#[derive(Clone, Debug)]
pub struct DiagnosisReport<T> {
    pub rank_g: usize,
    pub sigma: Vector<T>,
    pub rho: usize,
    pub k0: usize,
    pub full_rank: bool,
    /// Infinite when `g` is rank-deficient.
    pub condition: T,
}

/// `(A, F) = (Gᵀ, Hᵀ)`: column `m` of `F` is the right-hand side whose
/// solution is row `m` of `Q`.
pub fn assemble_system<T: Scalar>(t: &TrainingSet<T>) -> (Matrix<T>, Matrix<T>) {
    (t.g.transpose(), t.h.transpose())
}

/// Solves the M systems `Gᵀ·q^(m) = h_m` and stacks the solutions as rows
/// of `Q`. With [`Method::Pseudo`] this is `Q = H·G†`.
pub fn train<T: Scalar>(t: &TrainingSet<T>, method: &Method<T>) -> Result<WeightModel<T>> {
    let (a, f) = assemble_system(t);
    let m = t.n_outputs();
    let mut reports = Vec::with_capacity(m);
    match method {
        Method::Pseudo => {
            // one factorization shared by every row
            let s = svd(&a)?;
            let thr = s.default_tol();
            let zero = a.is_zero();
            for row in 0..m {
                let rhs = f.column(row);
                let q = if zero {
                    Vector::zeros(a.n_cols())
                } else {
                    apply_pinv(&s, &rhs, thr).0
                };
                let r = a.matvec(&q)?.sub(&rhs).norm();
                reports.push(SolveReport {
                    solution_norm: q.norm(),
                    q,
                    method: method.name().into(),
                    alpha: None,
                    stop_index: None,
                    residual_norm: r,
                });
            }
        }
        _ => {
            for row in 0..m {
                let r = solve(&a, &f.column(row), method).map_err(|e| Error::Row {
                    row,
                    source: Box::new(e),
                })?;
                reports.push(r);
            }
        }
    }
    let rows: Vec<Vec<T>> = reports.iter().map(|r| r.q.to_vec()).collect();
    Ok(WeightModel {
        q: Matrix::from_rows(&rows)?,
        bias: None,
        method_tag: method.tag(),
        per_row_reports: reports,
    })
}

/// Trains on inputs augmented with a constant 1 and splits the last column
/// of the recovered matrix off as the bias.
pub fn train_with_bias<T: Scalar>(t: &TrainingSet<T>, method: &Method<T>) -> Result<WeightModel<T>> {
    let method = match method {
        // q0 applies to the augmented unknowns
        Method::Tikhonov { q0: Some(q), .. } | Method::Lavrentiev { q0: Some(q), .. }
            if q.len() != t.n_inputs() + 1 =>
        {
            return Err(Error::DimMismatch(format!(
                "q0 must have length {} with bias augmentation",
                t.n_inputs() + 1
            )));
        }
        m => m,
    };
    let aug = TrainingSet::new(t.g.append_row(T::one()), t.h.clone())?;
    let model = train(&aug, method)?;
    let (q, bias) = model.q.split_last_column()?;
    Ok(WeightModel {
        q,
        bias: Some(bias),
        ..model
    })
}

/// `Q·g + b`.
pub fn predict<T: Scalar>(model: &WeightModel<T>, g: &[T]) -> Result<Vector<T>> {
    let out = model.q.matvec(g)?;
    match &model.bias {
        Some(b) => {
            dim_check(b.len() == out.len(), || "bias length does not match output size".into())?;
            Ok(out.add(b))
        }
        None => Ok(out),
    }
}

/// Rank, spectrum and identifiability of the input matrix `G`.
pub fn diagnose<T: Scalar>(t: &TrainingSet<T>, noise_floor: T) -> Result<DiagnosisReport<T>> {
    let s = svd(&t.g)?;
    let zero = t.g.is_zero();
    let rank = if zero { 0 } else { s.rank() };
    let k0 = (0..rank).filter(|&j| s.sigma[j] > noise_floor).count();
    let condition = if zero { T::infinity() } else { condition_from_svd(&s) };
    Ok(DiagnosisReport {
        rank_g: rank,
        rho: rank,
        k0,
        full_rank: rank == t.n_inputs().min(t.n_pairs()),
        condition,
        sigma: s.sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_f64_rows(rows).unwrap()
    }

    #[test]
    fn assembly() {
        let t = TrainingSet::new(m(&[&[1.0, 0.0], &[0.0, 0.0]]), m(&[&[1.0, 0.0], &[1.0, 0.0]])).unwrap();
        let (a, f) = assemble_system(&t);
        assert_eq!(a, m(&[&[1.0, 0.0], &[0.0, 0.0]]));
        assert_eq!(f, m(&[&[1.0, 1.0], &[0.0, 0.0]]));

        let t = TrainingSet::new(m(&[&[1.0], &[2.0]]), m(&[&[3.0]])).unwrap();
        let (a, f) = assemble_system(&t);
        assert_eq!(a, m(&[&[1.0, 2.0]]));
        assert_eq!(f, m(&[&[3.0]]));
        assert!(TrainingSet::new(m(&[&[1.0, 2.0]]), m(&[&[3.0]])).is_err());
    }

    #[test]
    fn train_examples() {
        let t = TrainingSet::new(m(&[&[2.0, 0.0], &[0.0, 4.0]]), m(&[&[2.0, 4.0], &[0.0, 8.0]])).unwrap();
        let model = train(&t, &Method::Pseudo).unwrap();
        assert!(model.q.sub(&m(&[&[1.0, 1.0], &[0.0, 2.0]])).unwrap().max_abs() < 1e-15);

        let h = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let t = TrainingSet::new(Matrix::identity(3), h.clone()).unwrap();
        assert_eq!(train(&t, &Method::Pseudo).unwrap().q, h);

        let t = TrainingSet::new(m(&[&[1.0, 0.0], &[0.0, 0.0]]), m(&[&[1.0, 0.0], &[1.0, 0.0]])).unwrap();
        let model = train(&t, &Method::Pseudo).unwrap();
        assert_eq!(model.q, m(&[&[1.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(predict(&model, &[1.0, 0.0]).unwrap().as_slice(), &[1.0, 1.0]);
        assert_eq!(model.per_row_reports.len(), 2);
    }

    #[test]
    fn train_propagates_row_errors() {
        let t = TrainingSet::new(m(&[&[1.0, 2.0], &[0.0, 1.0]]), m(&[&[1.0, 0.0]])).unwrap();
        let err = train(&t, &Method::Lavrentiev { alpha: 0.1, q0: None }).unwrap_err();
        assert_eq!(
            err,
            Error::Row {
                row: 0,
                source: Box::new(Error::NotSymmetric)
            }
        );
        assert_eq!(err.name(), "NotSymmetric");
    }

    #[test]
    fn predict_examples() {
        let model = WeightModel {
            q: Matrix::<f64>::identity(2),
            bias: None,
            method_tag: String::new(),
            per_row_reports: vec![],
        };
        assert_eq!(predict(&model, &[3.0, 4.0]).unwrap().as_slice(), &[3.0, 4.0]);
        assert!(predict(&model, &[3.0]).is_err());
        let model = WeightModel {
            q: Matrix::zeros(2, 3),
            bias: Some(Vector::new(vec![5.0, 6.0]).unwrap()),
            method_tag: String::new(),
            per_row_reports: vec![],
        };
        assert_eq!(predict(&model, &[1.0, 2.0, 3.0]).unwrap().as_slice(), &[5.0, 6.0]);
    }

    #[test]
    fn bias_examples() {
        let t = TrainingSet::new(m(&[&[0.0]]), m(&[&[7.0]])).unwrap();
        let model = train_with_bias(&t, &Method::Pseudo).unwrap();
        assert_eq!(model.q, m(&[&[0.0]]));
        assert_eq!(model.bias.as_ref().unwrap().as_slice(), &[7.0]);

        // constant outputs, inputs with zero mean: everything goes to the bias
        let g = m(&[&[1.0, -1.0, 2.0, -2.0], &[0.5, 1.0, -0.5, -1.0]]);
        let h = m(&[&[3.0, 3.0, 3.0, 3.0]]);
        let model = train_with_bias(&TrainingSet::new(g, h).unwrap(), &Method::Pseudo).unwrap();
        assert!(model.q.max_abs() < 1e-12);
        assert!((model.bias.unwrap()[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn diagnosis() {
        let t = TrainingSet::new(m(&[&[1.0, 0.0], &[0.0, 0.0]]), m(&[&[1.0, 0.0]])).unwrap();
        let d = diagnose(&t, 0.0).unwrap();
        assert_eq!((d.rank_g, d.full_rank), (1, false));
        assert!(d.condition.is_infinite());

        let t = TrainingSet::new(Matrix::<f64>::identity(5), Matrix::identity(5)).unwrap();
        let d = diagnose(&t, 0.0).unwrap();
        assert!(d.full_rank);
        assert_eq!((d.rank_g, d.rho, d.k0), (5, 5, 5));
        assert_eq!(d.condition, 1.0);
        assert_eq!(diagnose(&t, 2.0).unwrap().k0, 0);

        let t = TrainingSet::new(Matrix::<f64>::zeros(2, 2), Matrix::zeros(1, 2)).unwrap();
        let d = diagnose(&t, 0.0).unwrap();
        assert_eq!(d.rank_g, 0);
        assert!(!d.full_rank);
    }
}
