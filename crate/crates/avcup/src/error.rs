//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by field, ideal, class-group and cohomology operations.
///
/// Variants are split between usage errors (bad input) and mathematical
/// precondition failures, so the CLI can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("polynomial is reducible over Q: {0}")]
    ReduciblePolynomial(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero element where a nonzero element is required")]
    ZeroElement,
    #[error("zero ideal where a nonzero ideal is required")]
    ZeroIdeal,
    #[error("ideal is not an {0}-th power")]
    NotAnNthPower(u64),
    #[error("configured bounds exceeded: {0}")]
    BoundsExceeded(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("unit rank {0} exceeds the configured scope")]
    RankTooLarge(usize),
    #[error("K does not contain a primitive {0}-th root of unity")]
    RootOfUnityMissing(u64),
    #[error("extension is ramified; operation requires an everywhere-unramified extension")]
    RamifiedExtension,
    #[error("element norm is not 1")]
    NormNotOne,
    #[error("ideal norm is not the unit ideal")]
    NormNotTrivialIdeal,
    #[error("resolvent search exhausted after {0} retries")]
    ResolventExhausted(u32),
    #[error("class equation (sigma - 1) x = [M] has no solution; precondition violated")]
    ClassEquationUnsolvable,
    #[error("pair (a, \u{1d51e}) is not a cocycle: -div(a) != n*\u{1d51e}")]
    NotInZ1,
    #[error("value table does not descend to Z1/B1: {0}")]
    NotWellDefined(String),
    #[error("div(b) does not descend to the base field")]
    DescentFailure,
    #[error("n is even and K has a real place; modified cohomology is out of scope")]
    ScopeViolation,
    #[error("div(v) is not divisible by n in Div K")]
    NotDivisibleByN,
    #[error("could not factor {0} with the configured effort")]
    FactorizationStalled(String),
    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
