use thiserror::Error;

/// Errors raised by the symbolic and numeric layers.
///
/// Mathematical verdicts (not norm attaining, undecided) are never errors;
/// these variants signal malformed input or a caller logic error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid arc set: {0}")]
    InvalidArcs(String),
    #[error("invalid frequency band [{0}, {1}]")]
    InvalidBand(i64, i64),
    #[error("invalid Blaschke product: {0}")]
    InvalidBlaschke(String),
    #[error("divisor does not divide the Blaschke product")]
    NotDivisible,
    #[error("rational function has a pole in the closed unit disk at {0}")]
    PoleInDisk(String),
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("invalid rational function: {0}")]
    InvalidRational(String),
    #[error("unsupported symbol/inner combination: {0}")]
    UnsupportedCombination(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
