//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CharacteristicNotPrime(u64),
    #[error("modulus polynomial is reducible")]
    ReducibleModulus,
    #[error("declared generator is not primitive")]
    NonPrimitiveGenerator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field specs")]
    SpecMismatch,
    #[error("operation requires characteristic 2")]
    OddCharacteristic,
    #[error("curve polynomial is not separable")]
    NonSeparable,
    #[error("coprimality violated: {0}")]
    GcdViolation(String),
    #[error("explicit place ordering is invalid: {0}")]
    ExplicitOrderingIncomplete(String),
    #[error("valuations are only defined at the infinite and ramified places")]
    UnsupportedPlace,
    #[error("function has a pole at an evaluation place")]
    PoleAtPlace,
    #[error("divisor has nonzero degree {0}")]
    NonZeroDegree(i64),
    #[error("internal rank failure: code jump at a = {0} produced no independent vector")]
    InternalRankFailure(i64),
    #[error("isometry vector has a zero component at index {0}")]
    ZeroComponentInX(usize),
    #[error("basis list does not match the declared dimensions")]
    DimensionMismatch,
    #[error("translation function has the wrong divisor shape: {0}")]
    WrongDivisorShape(String),
    #[error("interpolation system unexpectedly singular")]
    SingularSystem,
    #[error("flag is not isometry-dual ({0})")]
    NotIsometryDual(String),
    #[error("self-orthogonal construction failed: {0}")]
    ConstructionFailed(String),
    #[error("no period found within bound {0}")]
    PeriodNotFoundWithinBound(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("code dimension sweep exceeded its cap at a = {0}")]
    SweepCapExceeded(i64),
    #[error("config error: {0}")]
    Config(String),
}
