//! Error type shared by every layer of the engine.

use alloc::string::String;

/// Errors raised by ring construction, Groebner computations, module and
/// complex operations, and scenario generation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum")]
    FieldTooLarge(u32),
    #[error("group orders must be positive")]
    ZeroGroupOrder,
    #[error("at least one polynomial variable is required")]
    NoVariables,
    #[error("ring needs {needed} variables but at most {max} are supported")]
    TooManyVariables { needed: usize, max: usize },
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("Groebner basis exceeded the size safeguard ({size} > {limit} vectors)")]
    GbSizeLimit { limit: usize, size: usize },
    #[error("input is not contained in the polynomial subring")]
    NotInLambda,
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("differentials do not compose to zero at degree {0}")]
    NotAComplex(i32),
    #[error("chain map does not commute at degree {0}")]
    NotAChainMap(i32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("resample budget of {budget} exhausted: {reason}")]
    ResampleBudget { budget: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
