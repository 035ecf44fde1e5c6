use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {defect:e} exceeds bound {bound:e}")]
    NonHermitian { defect: f64, bound: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last step {step:e})")]
    FixedPointNoConvergence { iterations: usize, step: f64 },

    #[error("function is not finite at eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("matrix is not positive definite: smallest eigenvalue {min_eig:e}, largest {max_eig:e}")]
    NotPositiveDefinite { min_eig: f64, max_eig: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid matrix shape: {0}")]
    Shape(String),

    #[error("matrix entry is not finite")]
    NonFinite,

    #[error("parameter t = {t} outside {range}")]
    TOutOfRange { t: f64, range: &'static str },

    #[error("parameter {name} = {value} outside {range}")]
    ParamOutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("Schatten index p = {0} must be >= 1")]
    POutOfRange(f64),

    #[error("compound order k = {k} outside [1, {n}]")]
    KOutOfRange { k: usize, n: usize },

    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("log-majorization requires strictly positive entries, found {0:e}")]
    NonpositiveForLog(f64),

    #[error("z = {re}{im:+}i is outside the strip 1/4 <= Re(z) <= 3/4")]
    ZOutOfStrip { re: f64, im: f64 },

    #[error("premise B^t <= A^(t-2) violated: largest eigenvalue of the gap is {excess:e} (tolerance {tolerance:e})")]
    PremiseViolated { excess: f64, tolerance: f64 },

    #[error("could not construct a premise-satisfying pair: {0}")]
    ConstructionFailed(String),

    #[error("need at least {needed} matrices, got {got}")]
    TooFewMatrices { needed: usize, got: usize },

    #[error("invalid campaign configuration: {0}")]
    ConfigInvalid(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{check_id} cell {cell} trial {trial} (seed {seed}): {source}")]
    Trial {
        check_id: String,
        cell: usize,
        trial: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable upper-case name of the error kind. Trial context is
    /// transparent: the code is that of the underlying error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonHermitian { .. } => "NON_HERMITIAN",
            Error::NoConvergence { .. } | Error::FixedPointNoConvergence { .. } => "NO_CONVERGENCE",
            Error::Domain { .. } | Error::NonFinite => "DOMAIN_ERROR",
            Error::NotPositiveDefinite { .. } => "NOT_POSITIVE_DEFINITE",
            Error::DimensionMismatch { .. } | Error::Shape(_) | Error::TooFewMatrices { .. } => "DIMENSION_MISMATCH",
            Error::TOutOfRange { .. } => "T_OUT_OF_RANGE",
            Error::ParamOutOfRange { .. } | Error::ConfigInvalid(_) => "CONFIG_INVALID",
            Error::POutOfRange(_) => "P_OUT_OF_RANGE",
            Error::KOutOfRange { .. } => "K_OUT_OF_RANGE",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::NonpositiveForLog(_) => "NONPOSITIVE_FOR_LOG",
            Error::ZOutOfStrip { .. } => "Z_OUT_OF_STRIP",
            Error::PremiseViolated { .. } => "PREMISE_VIOLATED",
            Error::ConstructionFailed(_) => "CONSTRUCTION_FAILED",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Trial { source, .. } => source.code(),
            Error::Io { .. } => "IO_ERROR",
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
