//! Noise sweeps: perturb a base system at each noise level, solve it with
//! every configured method and tabulate the outcome.

use std::io::Write;
use std::path::Path;

use lnnreg::{
    apriori_alpha_rule, discrepancy_alpha, generalized_discrepancy_alpha, solve, GdConfig, Matrix64, Method64,
    NoisyProblem, Vector64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::commands::{stop_rule, DEFAULT_MAX_ITER};
use crate::io::format_value;
use crate::CliError;

pub const HEADER: &str = "epsilon,method,alpha_or_n,residual,error_to_reference,solution_norm";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub system: System,
    pub reference: Vec<f64>,
    pub noise_levels: Vec<f64>,
    pub perturbation: Perturbation,
    pub methods: Vec<MethodSpec>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct System {
    pub a: Vec<Vec<f64>>,
    pub f: Vec<f64>,
}

/// Zero-based entry position.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    /// Adds ε to one operator entry; `h = ε`, `δ = 0`.
    OperatorEntry(Entry),
    /// Adds ε times a random unit vector to the data; `h = 0`, `δ = ε`.
    DataVector,
    /// Both of the above; `h = δ = ε`.
    Both(Entry),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Value(f64),
    Rule(AlphaRule),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    Discrepancy,
    Generalized,
    Apriori { p: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum MethodSpec {
    Pseudo {
        label: Option<String>,
    },
    Tikhonov {
        alpha: AlphaSpec,
        label: Option<String>,
    },
    Lavrentiev {
        alpha: AlphaSpec,
        label: Option<String>,
    },
    Landweber {
        rule: Option<u8>,
        #[serde(default)]
        rule_consts: Vec<f64>,
        max_iter: Option<usize>,
        label: Option<String>,
    },
    Gd {
        learning_rate: f64,
        max_epochs: usize,
        #[serde(default)]
        l1_alpha: f64,
        #[serde(default)]
        l2_alpha: f64,
        label: Option<String>,
    },
}

impl MethodSpec {
    pub fn label(&self) -> String {
        let (custom, name) = match self {
            MethodSpec::Pseudo { label } => (label, "pseudo"),
            MethodSpec::Tikhonov { label, .. } => (label, "tikhonov"),
            MethodSpec::Lavrentiev { label, .. } => (label, "lavrentiev"),
            MethodSpec::Landweber { label, .. } => (label, "landweber"),
            MethodSpec::Gd { label, .. } => (label, "gd"),
        };
        custom.clone().unwrap_or_else(|| name.to_string())
    }

    fn to_method(&self, p: &NoisyProblem<f64>) -> lnnreg::Result<Method64> {
        let alpha_of = |spec: &AlphaSpec| -> lnnreg::Result<f64> {
            match spec {
                AlphaSpec::Value(v) => Ok(*v),
                AlphaSpec::Rule(AlphaRule::Discrepancy) => {
                    Ok(discrepancy_alpha(&p.a_h, &p.f_delta, p.delta, None)?.alpha)
                }
                AlphaSpec::Rule(AlphaRule::Generalized) => Ok(generalized_discrepancy_alpha(p, None)?.alpha),
                AlphaSpec::Rule(AlphaRule::Apriori { p: exponent }) => apriori_alpha_rule(p, *exponent),
            }
        };
        Ok(match self {
            MethodSpec::Pseudo { .. } => Method64::Pseudo,
            MethodSpec::Tikhonov { alpha, .. } => Method64::Tikhonov {
                alpha: alpha_of(alpha)?,
                q0: None,
            },
            MethodSpec::Lavrentiev { alpha, .. } => Method64::Lavrentiev {
                alpha: alpha_of(alpha)?,
                q0: None,
            },
            MethodSpec::Landweber {
                rule,
                rule_consts,
                max_iter,
                ..
            } => Method64::Landweber {
                h: p.h,
                delta: p.delta,
                rule: match rule {
                    Some(r) => {
                        Some(stop_rule(*r, rule_consts).map_err(|e| lnnreg::Error::InvalidConfig(e.to_string()))?)
                    }
                    None => None,
                },
                max_iter: max_iter.unwrap_or(DEFAULT_MAX_ITER),
                q0: None,
            },
            MethodSpec::Gd {
                learning_rate,
                max_epochs,
                l1_alpha,
                l2_alpha,
                ..
            } => {
                let mut config = GdConfig::new(*learning_rate, *max_epochs);
                config.l1_alpha = *l1_alpha;
                config.l2_alpha = *l2_alpha;
                Method64::Gd { config, q0: None }
            }
        })
    }
}

/// A validated experiment ready to run.
#[derive(Debug)]
pub struct Experiment {
    pub a: Matrix64,
    pub f: Vector64,
    pub reference: Vector64,
    pub spec: ExperimentSpec,
}

pub fn parse_spec(text: &str) -> Result<Experiment, CliError> {
    let spec: ExperimentSpec =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("line {}: {e}", e.line())))?;
    if spec.noise_levels.is_empty() {
        return Err(CliError::Parse("noise_levels is empty".into()));
    }
    if spec.noise_levels.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(CliError::Parse("noise levels must be positive".into()));
    }
    if spec.noise_levels.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Parse("noise levels must be strictly decreasing".into()));
    }
    if spec.methods.is_empty() {
        return Err(CliError::Parse("methods is empty".into()));
    }
    let a = Matrix64::from_rows(&spec.system.a)?;
    let f = Vector64::new(spec.system.f.clone())?;
    let reference = Vector64::new(spec.reference.clone())?;
    if f.len() != a.n_rows() || reference.len() != a.n_cols() {
        return Err(CliError::Shape(format!(
            "system is {}x{} but f has length {} and reference has length {}",
            a.n_rows(),
            a.n_cols(),
            f.len(),
            reference.len()
        )));
    }
    if let Perturbation::OperatorEntry(e) | Perturbation::Both(e) = spec.perturbation {
        if e.row >= a.n_rows() || e.col >= a.n_cols() {
            return Err(CliError::Shape(format!(
                "entry ({}, {}) lies outside the operator",
                e.row, e.col
            )));
        }
    }
    Ok(Experiment { a, f, reference, spec })
}

/// Uniformly distributed direction on the unit sphere.
fn unit_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

impl Experiment {
    /// The perturbed problem for the noise level at `row_index`.
    pub fn perturbed(&self, row_index: usize) -> lnnreg::Result<NoisyProblem<f64>> {
        let eps = self.spec.noise_levels[row_index];
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed.wrapping_add(row_index as u64));
        let bump = |e: Entry| self.a.with_entry(e.row, e.col, self.a[(e.row, e.col)] + eps);
        let shift = |rng: &mut ChaCha8Rng| {
            let u = unit_direction(rng, self.f.len());
            Vector64::new(self.f.iter().zip(u).map(|(x, d)| x + eps * d).collect())
        };
        match self.spec.perturbation {
            Perturbation::OperatorEntry(e) => NoisyProblem::new(bump(e)?, self.f.clone(), eps, 0.0),
            Perturbation::DataVector => NoisyProblem::new(self.a.clone(), shift(&mut rng)?, 0.0, eps),
            Perturbation::Both(e) => NoisyProblem::new(bump(e)?, shift(&mut rng)?, eps, eps),
        }
    }

    /// Writes the CSV table; failed rows are marked and counted.
    pub fn run(&self, out: &mut dyn Write, errors: &mut dyn Write) -> Result<usize, CliError> {
        writeln!(out, "{HEADER}")?;
        let mut failed = 0;
        for (i, &eps) in self.spec.noise_levels.iter().enumerate() {
            let problem = self.perturbed(i);
            for m in &self.spec.methods {
                let label = m.label();
                let outcome = match &problem {
                    Ok(p) => m.to_method(p).and_then(|method| solve(&p.a_h, &p.f_delta, &method)),
                    Err(e) => Err(e.clone()),
                };
                match outcome {
                    Ok(r) => {
                        let param = match (r.alpha, r.stop_index) {
                            (Some(alpha), _) => format_value(alpha),
                            (None, Some(n)) => n.to_string(),
                            (None, None) => String::new(),
                        };
                        writeln!(
                            out,
                            "{},{label},{param},{},{},{}",
                            format_value(eps),
                            format_value(r.residual_norm),
                            format_value(r.q.distance(&self.reference)),
                            format_value(r.solution_norm)
                        )?;
                    }
                    Err(e) => {
                        failed += 1;
                        writeln!(out, "{},{label},FAILED,,,", format_value(eps))?;
                        writeln!(errors, "epsilon {}: {label}: {}: {e}", format_value(eps), e.name())?;
                    }
                }
            }
        }
        Ok(failed)
    }
}

pub fn run_file(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let exp = parse_spec(&text).map_err(|e| e.in_file(path))?;
    let failed = exp.run(out, &mut std::io::stderr())?;
    if failed > 0 {
        Err(CliError::RowsFailed(failed))
    } else {
        Ok(())
    }
}
