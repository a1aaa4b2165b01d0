//! Subcommand definitions and their implementations.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lnnreg::{
    apriori_alpha_rule, diagnose, discrepancy_alpha, generalized_discrepancy_alpha, numerical_rank, pinv, predict,
    solve, spectral_norm, svd, tikhonov, train, train_with_bias, Error, GdConfig, Matrix64, Method64, NoisyProblem,
    StopRule, TrainingSet, Vector64,
};
use serde_json::json;

use crate::io::{
    format_matrix, format_row, format_value, matrix_to_vector, model_json, read_matrix, read_model, read_vector,
};
use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "lnnreg",
    version,
    about = "Regularized solvers for ill-posed linear systems and linear networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the singular values of a matrix
    Svd { matrix: PathBuf },
    /// Print the Moore-Penrose pseudo-inverse
    Pinv {
        matrix: PathBuf,
        /// Relative truncation threshold
        #[arg(long)]
        rtol: Option<f64>,
    },
    /// Print the numerical rank
    Rank {
        matrix: PathBuf,
        /// Absolute singular value threshold
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Solve A q = f with the chosen method
    Solve {
        a: PathBuf,
        f: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Print a single JSON object
        #[arg(long)]
        json: bool,
    },
    /// Choose the Tikhonov parameter from noise levels
    SelectAlpha {
        a: PathBuf,
        f: PathBuf,
        #[arg(long, value_enum)]
        principle: Principle,
        #[arg(long = "h", default_value_t = 0.0)]
        h: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Exponent of the a priori rule
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Bisection tolerance on the discrepancy
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Recover the weight matrix from inputs G (columns) and answers H (columns)
    Train {
        #[arg(value_name = "G")]
        inputs: PathBuf,
        #[arg(value_name = "H")]
        answers: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Fit a bias vector as well
        #[arg(long)]
        bias: bool,
        /// Write the model here instead of stdout
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Apply a trained model to an input vector or to the columns of a matrix
    Predict {
        #[arg(long)]
        model_in: PathBuf,
        input: PathBuf,
    },
    /// Rank and identifiability report for the inputs G
    Diagnose {
        g: PathBuf,
        h: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        noise_floor: f64,
    },
    /// Run a noise sweep described by a JSON file and print a CSV table
    Experiment { spec: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    Pseudo,
    Tikhonov,
    Lavrentiev,
    Landweber,
    Gd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Principle {
    Discrepancy,
    Generalized,
    Apriori,
}

#[derive(Args, Debug, Clone)]
pub struct MethodArgs {
    #[arg(long, value_enum, default_value_t = MethodKind::Pseudo)]
    pub method: MethodKind,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub q0_file: Option<PathBuf>,
    /// Operator error bound
    #[arg(long = "h")]
    pub h: Option<f64>,
    /// Data error bound
    #[arg(long)]
    pub delta: Option<f64>,
    /// Landweber stopping rule
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub rule: Option<u8>,
    /// Comma-separated rule constants: rule 1 a1,a2; rule 2 a0,a1; rule 3 a,a1,a2
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub rule_consts: Vec<f64>,
    /// Landweber steps or gradient descent epochs
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub l1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub l2: f64,
}

pub const DEFAULT_MAX_ITER: usize = 1000;

pub fn stop_rule(rule: u8, consts: &[f64]) -> Result<StopRule<f64>, CliError> {
    let pick = |defaults: &[f64]| -> Result<Vec<f64>, CliError> {
        match consts.len() {
            0 => Ok(defaults.to_vec()),
            n if n == defaults.len() => Ok(consts.to_vec()),
            n => Err(CliError::Parse(format!(
                "rule {rule} takes {} constants, got {n}",
                defaults.len()
            ))),
        }
    };
    Ok(match rule {
        1 => {
            let c = pick(&[1.0, 1.0])?;
            StopRule::StepNorm { a1: c[0], a2: c[1] }
        }
        2 => {
            let c = pick(&[1.0, 1.5])?;
            StopRule::Residual { a0: c[0], a1: c[1] }
        }
        3 => {
            let c = pick(&[2.0, 1.5, 1.5])?;
            StopRule::Combined {
                a: c[0],
                a1: c[1],
                a2: c[2],
            }
        }
        other => return Err(CliError::Parse(format!("unknown rule {other}"))),
    })
}

/// Builds the solver configuration. `data` enables discrepancy-based α for
/// Tikhonov when only `--delta` is given.
pub fn build_method(args: &MethodArgs, a: &Matrix64, data: Option<&[f64]>) -> Result<Method64, CliError> {
    let q0 = args.q0_file.as_deref().map(read_vector).transpose()?;
    Ok(match args.method {
        MethodKind::Pseudo => Method64::Pseudo,
        MethodKind::Tikhonov => {
            let alpha = match (args.alpha, args.delta, data) {
                (Some(alpha), _, _) => alpha,
                (None, Some(delta), Some(f)) => discrepancy_alpha(a, f, delta, None)?.alpha,
                _ => return Err(Error::BadAlpha(f64::NAN).into()),
            };
            Method64::Tikhonov { alpha, q0 }
        }
        MethodKind::Lavrentiev => {
            let alpha = args.alpha.ok_or(Error::BadAlpha(f64::NAN))?;
            Method64::Lavrentiev { alpha, q0 }
        }
        MethodKind::Landweber => Method64::Landweber {
            h: args.h.unwrap_or(0.0),
            delta: args.delta.unwrap_or(0.0),
            rule: args.rule.map(|r| stop_rule(r, &args.rule_consts)).transpose()?,
            max_iter: args.max_iter.unwrap_or(DEFAULT_MAX_ITER),
            q0,
        },
        MethodKind::Gd => {
            let lr = match args.learning_rate {
                Some(lr) => lr,
                None => {
                    let s = spectral_norm(a)?;
                    if s > 0.0 {
                        0.5 / (s * s + args.l2)
                    } else {
                        0.5
                    }
                }
            };
            let mut config = GdConfig::new(lr, args.max_iter.unwrap_or(DEFAULT_MAX_ITER));
            config.l1_alpha = args.l1;
            config.l2_alpha = args.l2;
            Method64::Gd { config, q0 }
        }
    })
}

fn opt_value(x: Option<f64>) -> serde_json::Value {
    x.map_or(serde_json::Value::Null, |v| json!(v))
}

pub fn run(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Svd { matrix } => {
            let s = svd(&read_matrix(matrix)?)?;
            writeln!(out, "{}", format_row(&s.sigma))?;
        }
        Command::Pinv { matrix, rtol } => {
            write!(out, "{}", format_matrix(&pinv(&read_matrix(matrix)?, *rtol)?))?;
        }
        Command::Rank { matrix, tol } => {
            writeln!(out, "{}", numerical_rank(&read_matrix(matrix)?, *tol)?)?;
        }
        Command::Solve { a, f, method, json } => {
            let a = read_matrix(a)?;
            let f = read_vector(f)?;
            let m = build_method(method, &a, Some(&f))?;
            let r = solve(&a, &f, &m)?;
            if *json {
                let obj = json!({
                    "q": r.q.as_slice(),
                    "residual_norm": r.residual_norm,
                    "solution_norm": r.solution_norm,
                    "alpha": opt_value(r.alpha),
                    "stop_index": r.stop_index,
                    "method": r.method,
                });
                writeln!(out, "{obj}")?;
            } else {
                writeln!(out, "method = {}", r.method)?;
                writeln!(out, "q = {}", format_row(&r.q))?;
                writeln!(out, "residual_norm = {}", format_value(r.residual_norm))?;
                writeln!(out, "solution_norm = {}", format_value(r.solution_norm))?;
                if let Some(alpha) = r.alpha {
                    writeln!(out, "alpha = {}", format_value(alpha))?;
                }
                if let Some(n) = r.stop_index {
                    writeln!(out, "stop_index = {n}")?;
                }
            }
        }
        Command::SelectAlpha {
            a,
            f,
            principle,
            h,
            delta,
            p,
            tol,
        } => {
            let a = read_matrix(a)?;
            let f = read_vector(f)?;
            let problem = NoisyProblem::new(a, f, *h, *delta)?;
            let (alpha, gap) = match principle {
                Principle::Discrepancy => {
                    let r = discrepancy_alpha(&problem.a_h, &problem.f_delta, *delta, *tol)?;
                    (r.alpha, r.discrepancy_gap)
                }
                Principle::Generalized => {
                    let r = generalized_discrepancy_alpha(&problem, *tol)?;
                    (r.alpha, r.discrepancy_gap)
                }
                Principle::Apriori => {
                    let alpha = apriori_alpha_rule(&problem, *p)?;
                    let s = tikhonov(&problem.a_h, &problem.f_delta, alpha, None)?;
                    (alpha, s.residual_norm - h * s.solution_norm - delta)
                }
            };
            writeln!(out, "alpha = {}", format_value(alpha))?;
            writeln!(out, "gap = {}", format_value(gap))?;
        }
        Command::Train {
            inputs,
            answers,
            method,
            bias,
            model_out,
        } => {
            let set = TrainingSet::new(read_matrix(inputs)?, read_matrix(answers)?)?;
            let m = build_method(method, &set.g.transpose(), None)?;
            let model = if *bias {
                train_with_bias(&set, &m)?
            } else {
                train(&set, &m)?
            };
            let text = model_json(&model);
            match model_out {
                Some(path) => {
                    std::fs::write(path, format!("{text}\n"))
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let fit = fit_residual(&model, &set)?;
                    writeln!(out, "method_tag = {}", model.method_tag)?;
                    writeln!(out, "fit_residual = {}", format_value(fit))?;
                    writeln!(out, "model = {}", path.display())?;
                }
                None => writeln!(out, "{text}")?,
            }
        }
        Command::Predict { model_in, input } => {
            let model = read_model(model_in)?;
            let x = read_matrix(input)?;
            let n = model.q.n_cols();
            if (x.n_rows() == 1 || x.n_cols() == 1) && x.as_slice().len() == n {
                let v = matrix_to_vector(x)?;
                writeln!(out, "{}", format_row(&predict(&model, &v)?))?;
            } else {
                if x.n_rows() != n {
                    return Err(CliError::Shape(format!(
                        "model expects inputs of length {n}, got a {}x{} file",
                        x.n_rows(),
                        x.n_cols()
                    )));
                }
                let cols = (0..x.n_cols())
                    .map(|k| predict(&model, &x.column(k)))
                    .collect::<lnnreg::Result<Vec<Vector64>>>()?;
                let outputs = Matrix64::from_columns(&cols)?;
                write!(out, "{}", format_matrix(&outputs))?;
            }
        }
        Command::Diagnose { g, h, noise_floor } => {
            let g = read_matrix(g)?;
            let h = match h {
                Some(path) => read_matrix(path)?,
                None => Matrix64::zeros(1, g.n_cols()),
            };
            let r = diagnose(&TrainingSet::new(g, h)?, *noise_floor)?;
            writeln!(out, "rank = {}", r.rank_g)?;
            writeln!(out, "full_rank = {}", r.full_rank)?;
            writeln!(out, "rho = {}", r.rho)?;
            writeln!(out, "k0 = {}", r.k0)?;
            writeln!(out, "condition = {}", format_value(r.condition))?;
            writeln!(out, "sigma = {}", format_row(&r.sigma))?;
        }
        Command::Experiment { spec } => crate::experiment::run_file(spec, out)?,
    }
    Ok(())
}

fn fit_residual(model: &lnnreg::WeightModel64, set: &TrainingSet<f64>) -> Result<f64, CliError> {
    let mut err = 0.0;
    for k in 0..set.n_pairs() {
        let d = predict(model, &set.g.column(k))?.sub(&set.h.column(k));
        err += d.norm() * d.norm();
    }
    Ok(err.sqrt())
}
