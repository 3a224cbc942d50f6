use thiserror::Error;

use crate::algebra::Dim;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis index {index} out of range (supported: 0..{max})")]
    BasisIndex { index: usize, max: usize },
    #[error("mixing coefficients are all zero")]
    ZeroMix,
    #[error("too many mixing coefficients: {len} (maximum {max})")]
    MixTooLong { len: usize, max: usize },
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("Gaussian width must be positive and finite, got {0}")]
    InvalidWidth(f64),
    #[error("convolution width must be positive and finite, got {0}")]
    InvalidConvolutionWidth(f64),
    #[error("Gaussian widths differ ({0} vs {1})")]
    WidthMismatch(f64, f64),
    #[error("operation requires dimension {expected}, got {found}")]
    DimensionMismatch { expected: Dim, found: Dim },
    #[error("basis decomposition requires width 1/2, got {0}")]
    NotEigenWidth(f64),
    #[error("derivative order {q} exceeds the configured maximum {max}")]
    DerivativeOrder { q: usize, max: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix rows are ragged or empty")]
    NotSquare,
    #[error("Toeplitz order must be at least 2, got {0}")]
    ToeplitzOrder(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("quadrature failed to converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },
    #[error("weights must be positive with sum at most 1")]
    InvalidWeights,
    #[error("root-of-unity combination has imaginary residue {residue:e} at r = {r}")]
    ImaginaryResidue { r: f64, residue: f64 },
    #[error("criterion {criterion} is not defined in dimension {dim}")]
    CriterionDimension { criterion: String, dim: Dim },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("output failed: {0}")]
    Output(String),
}

impl Error {
    /// Failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature { .. } | Error::ImaginaryResidue { .. })
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
