use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("operation undefined for the zero matrix")]
    ZeroMatrix,
    #[error("singular value iteration did not converge after {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("regularization parameter must be positive, got {0}")]
    BadAlpha(f64),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive semi-definite")]
    NotPsd,
    #[error("stabilizer matrix L is singular")]
    SingularL,
    #[error("shifted matrix A + alpha*B is numerically singular")]
    SingularShift,
    #[error("noise order must satisfy 0 < epsilon <= 1, got {0}")]
    BadEpsilon(f64),
    #[error("exponent must exceed 1, got {0}")]
    BadExponent(f64),
    #[error("noise levels h and delta are both zero")]
    ZeroNoise,
    #[error("delta {delta} does not exceed the minimal attainable residual {r_min}")]
    DeltaTooSmall { delta: f64, r_min: f64 },
    #[error("delta {delta} is not below the data norm {f_norm}")]
    DeltaTooLarge { delta: f64, f_norm: f64 },
    #[error("discrepancy function has no sign change on the search bracket")]
    NoSignChange,
    #[error("root search did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("stopping rule never triggered within {len} iterates")]
    NeverTriggered { len: usize },
    #[error("stopping threshold is zero and the residual never vanished")]
    DegenerateThreshold,
    #[error("gradient descent diverged at epoch {epoch}")]
    DivergenceDetected { epoch: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("row {row}: {source}")]
    Row {
        row: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Stable variant name, used by front ends that report errors verbatim.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimMismatch(_) => "DimMismatch",
            Error::NonFinite => "NonFinite",
            Error::Empty => "Empty",
            Error::ZeroMatrix => "ZeroMatrix",
            Error::SvdNoConvergence { .. } => "SvdNoConvergence",
            Error::Singular => "Singular",
            Error::BadAlpha(_) => "BadAlpha",
            Error::NotSymmetric => "NotSymmetric",
            Error::NotPsd => "NotPsd",
            Error::SingularL => "SingularL",
            Error::SingularShift => "SingularShift",
            Error::BadEpsilon(_) => "BadEpsilon",
            Error::BadExponent(_) => "BadExponent",
            Error::ZeroNoise => "ZeroNoise",
            Error::DeltaTooSmall { .. } => "DeltaTooSmall",
            Error::DeltaTooLarge { .. } => "DeltaTooLarge",
            Error::NoSignChange => "NoSignChange",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NeverTriggered { .. } => "NeverTriggered",
            Error::DegenerateThreshold => "DegenerateThreshold",
            Error::DivergenceDetected { .. } => "DivergenceDetected",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Row { source, .. } => source.name(),
        }
    }

    /// True for shape/dimension problems as opposed to numerical failures.
    pub fn is_shape(&self) -> bool {
        match self {
            Error::DimMismatch(_) | Error::Empty => true,
            Error::Row { source, .. } => source.is_shape(),
            _ => false,
        }
    }
}

pub(crate) fn dim_check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::DimMismatch(what()))
    }
}
