//! Library side of the `lnnreg` command-line tool: file formats, command
//! implementations and the noise-sweep experiment runner.

use std::path::Path;

pub mod commands;
pub mod experiment;
pub mod io;

/// Command failure, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Shape(String),
    #[error("{}: {0}", .0.name())]
    Solver(lnnreg::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Output(#[from] std::io::Error),
    /// Some experiment rows failed; the table was still written.
    #[error("{0} experiment row(s) failed")]
    RowsFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Shape(_) => 3,
            CliError::Solver(_) | CliError::RowsFailed(_) => 4,
            CliError::Output(_) => 1,
        }
    }

    pub(crate) fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            CliError::Shape(m) => CliError::Shape(format!("{}: {m}", path.display())),
            other => other,
        }
    }
}

impl From<lnnreg::Error> for CliError {
    fn from(e: lnnreg::Error) -> Self {
        if e.is_shape() {
            CliError::Shape(e.to_string())
        } else {
            CliError::Solver(e)
        }
    }
}
