use thiserror::Error;

/// Everything that can go wrong while building or evaluating operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent p must be a finite real >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("index {index} lies outside the window [-{window}, {window}] of a table-defined object")]
    WindowExceeded { index: i64, window: u64 },

    #[error("level {level} has non-positive or non-finite mass {mass}")]
    NonPositiveMass { level: i64, mass: f64 },

    #[error("weight at index {index} is non-positive or non-finite ({value})")]
    NonPositiveWeight { index: i64, value: f64 },

    #[error("cell fractions must be positive and sum to 1 (sum = {sum})")]
    CellFractions { sum: f64 },

    #[error("cell masses at level {level} sum to {sum}, expected level mass {expected}")]
    CellMassMismatch { level: i64, sum: f64, expected: f64 },

    #[error("level-0 cell {cell} has share {share}, but its cell fraction is {expected}")]
    LevelZeroCells { cell: usize, share: f64, expected: f64 },

    #[error(
        "distortion bound violated at level {level}, cell {cell}: ratio {ratio} outside [1/{declared}, {declared}]"
    )]
    DistortionViolated {
        level: i64,
        cell: usize,
        ratio: f64,
        declared: f64,
    },

    #[error("value at index {index} is not finite")]
    NonFinite { index: i64 },

    #[error("the zero vector is excluded here: {0}")]
    ZeroVector(&'static str),

    #[error("empty horizon")]
    EmptyHorizon,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Window and domain errors, as opposed to malformed input data.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::WindowExceeded { .. } | Error::NonFinite { .. } | Error::ZeroVector(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}
