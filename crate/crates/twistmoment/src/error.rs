//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(i64, i64),
    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(i64, i64),
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("modulus {0} is even")]
    EvenModulus(i64),
    #[error("argument {0} outside the function domain")]
    DomainError(f64),
    #[error("gamma pole at non-positive integer {0}")]
    PoleError(f64),
    #[error("quadrature did not converge: {0} evaluations, error estimate {1:.3e}")]
    QuadratureDidNotConverge(usize, f64),
    #[error("window support must stay away from 0")]
    UnsupportedWindow,
    #[error("outside the accuracy window: {0}")]
    OutOfAccuracyWindow(String),
    #[error("character must be primitive")]
    NonPrimitiveCharacter,
    #[error("level {0} divides the twist modulus {1}")]
    LevelDividesModulus(i64, i64),
    #[error("eigenvalue cache miss: need a_p for p = {0} beyond P_max = {1}")]
    CacheMiss(i64, i64),
    #[error("level {0} is not a built-in family")]
    NotBuiltIn(i64),
    #[error("S_2({0}) is not one-dimensional")]
    NotOneDimensional(i64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("curve model {0} failed validation: {1}")]
    InvalidCurveModel(String, String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
