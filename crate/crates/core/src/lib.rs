//! Recovery of linear network weights from training pairs by regularized
//! solution of (generally ill-posed) linear systems.
//!
//! Every routine is generic over a [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below cover the usual double-precision case.
//!
//! - [`svd`] / [`matrix`]: dense matrices and one-sided Jacobi SVD
//! - [`pseudo`]: pseudo-inverse and normal pseudo-solutions
//! - [`regularizers`]: Tikhonov, Lavrentiev, general stabilizers, shifted systems
//! - [`param_select`]: discrepancy principles and a-priori α rules
//! - [`iterative`]: Landweber with stopping rules, penalized gradient descent
//! - [`lnn`]: training, prediction and diagnosis of linear networks

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dense;
pub mod error;
pub mod iterative;
pub mod lnn;
pub mod matrix;
pub mod param_select;
pub mod pseudo;
pub mod regularizers;
pub mod scalar;
pub mod solver;
pub mod svd;

pub use error::{Error, Result};
pub use iterative::{
    early_stop_monitor, gd_train, landweber, stop_rule_1, stop_rule_2, stop_rule_3, EarlyStopping, GdConfig,
    IterationTrace, StopCondition, StopDecision, StopRule, StopRuleKind, Validation,
};
pub use lnn::{assemble_system, diagnose, predict, train, train_with_bias, DiagnosisReport, TrainingSet, WeightModel};
pub use matrix::{Matrix, Vector};
pub use param_select::{
    apriori_alpha_rule, discrepancy_alpha, generalized_discrepancy_alpha, AlphaSearchResult, NoisyProblem,
};
pub use pseudo::{
    identifiable_combinations, normal_equations, normal_pseudo_solution_rel, pinv, pseudo_solution, CombinationReport,
    PseudoSolveResult,
};
pub use regularizers::{
    apriori_alpha, bound_phi, bound_psi, lavrentiev, shifted_b, tikhonov, tikhonov_general, ErrorBoundModel,
    RegularizedSolution,
};
pub use scalar::Scalar;
pub use solver::{solve, Method, SolveReport};
pub use svd::{condition_number, numerical_rank, spectral_norm, svd, Svd};

pub type Matrix64 = Matrix<f64>;
pub type Vector64 = Vector<f64>;
pub type Svd64 = Svd<f64>;
pub type NoisyProblem64 = NoisyProblem<f64>;
pub type TrainingSet64 = TrainingSet<f64>;
pub type WeightModel64 = WeightModel<f64>;
pub type Method64 = Method<f64>;
pub type SolveReport64 = SolveReport<f64>;

pub type Matrix32 = Matrix<f32>;
pub type Vector32 = Vector<f32>;
pub type Svd32 = Svd<f32>;
