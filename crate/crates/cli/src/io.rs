//! Matrix CSV files and JSON weight models.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use lnnreg::{Matrix64, Vector64, WeightModel64};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Parses CSV text: one matrix row per line, comma-separated decimals, an
/// optional `# rows cols` header, blank lines and other `#` lines ignored.
pub fn parse_matrix(text: &str) -> Result<Matrix64, CliError> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if rows.is_empty() && header.is_none() {
                header = parse_header(comment);
            }
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| parse_value(tok.trim(), line_no))
            .collect::<Result<Vec<f64>, CliError>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(CliError::Parse(format!(
                    "line {line_no}: expected {} values, found {}",
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Shape("matrix file holds no data".into()));
    }
    let (r, c) = (rows.len(), rows[0].len());
    if let Some((hr, hc)) = header {
        if (hr, hc) != (r, c) {
            return Err(CliError::Shape(format!("header declares {hr}x{hc}, data is {r}x{c}")));
        }
    }
    Ok(Matrix64::from_rows(&rows)?)
}

fn parse_header(comment: &str) -> Option<(usize, usize)> {
    let mut it = comment.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(r)), Some(Ok(c)), None) => Some((r, c)),
        _ => None,
    }
}

fn parse_value(tok: &str, line_no: usize) -> Result<f64, CliError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(CliError::Parse(format!("line {line_no}: non-finite value {tok:?}"))),
        Err(_) => Err(CliError::Parse(format!(
            "line {line_no}: cannot parse {tok:?} as a number"
        ))),
    }
}

/// A vector file is a matrix file with a single row or a single column.
pub fn parse_vector(text: &str) -> Result<Vector64, CliError> {
    matrix_to_vector(parse_matrix(text)?)
}

pub fn matrix_to_vector(m: Matrix64) -> Result<Vector64, CliError> {
    if m.n_rows() == 1 || m.n_cols() == 1 {
        Ok(Vector64::new(m.as_slice().to_vec())?)
    } else {
        Err(CliError::Shape(format!(
            "expected a vector, found a {}x{} matrix",
            m.n_rows(),
            m.n_cols()
        )))
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<Matrix64, CliError> {
    parse_matrix(&read(path)?).map_err(|e| e.in_file(path))
}

pub fn read_vector(path: &Path) -> Result<Vector64, CliError> {
    parse_vector(&read(path)?).map_err(|e| e.in_file(path))
}

/// Shortest decimal text that parses back to the same bits.
pub fn format_value(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e16 {
        format!("{x}")
    } else {
        format!("{x:?}")
    }
}

pub fn format_row(values: &[f64]) -> String {
    values.iter().map(|&x| format_value(x)).collect::<Vec<_>>().join(",")
}

pub fn format_matrix(m: &Matrix64) -> String {
    let mut out = String::new();
    for i in 0..m.n_rows() {
        let _ = writeln!(out, "{}", format_row(m.row(i)));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub q: Vec<Vec<f64>>,
    pub bias: Option<Vec<f64>>,
    pub method_tag: String,
}

impl ModelFile {
    pub fn from_model(m: &WeightModel64) -> Self {
        ModelFile {
            q: m.q.to_rows(),
            bias: m.bias.as_ref().map(|b| b.to_vec()),
            method_tag: m.method_tag.clone(),
        }
    }

    pub fn into_model(self) -> Result<WeightModel64, CliError> {
        let q = Matrix64::from_rows(&self.q)?;
        let bias = match self.bias {
            Some(b) => {
                if b.len() != q.n_rows() {
                    return Err(CliError::Shape(format!(
                        "bias has length {}, q has {} rows",
                        b.len(),
                        q.n_rows()
                    )));
                }
                Some(Vector64::new(b)?)
            }
            None => None,
        };
        Ok(WeightModel64 {
            q,
            bias,
            method_tag: self.method_tag,
            per_row_reports: Vec::new(),
        })
    }
}

pub fn read_model(path: &Path) -> Result<WeightModel64, CliError> {
    let text = read(path)?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: line {}: {e}", path.display(), e.line())))?;
    file.into_model()
}

pub fn model_json(m: &WeightModel64) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(m)).expect("model serializes")
}
