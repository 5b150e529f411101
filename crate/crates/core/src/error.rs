use thiserror::Error;

use crate::tuple::Tuple;

/// Arithmetic was asked for outside the domain where it is defined.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("delta is undefined for r = {0} (denominator r - 1 must be positive)")]
    DeltaUndefined(i64),
    #[error("reduced residue needs a positive modulus, got {0}")]
    NonPositiveModulus(i64),
    #[error("no BN-curve exists: rho({d}, {g}, {r}) = {rho} < 0")]
    NegativeRho { d: i64, g: i64, r: i64, rho: i64 },
    #[error("{0}")]
    OutOfRange(String),
    #[error("splitting type must be nonempty")]
    EmptySplittingType,
}

/// A reduction rule could not be applied to a tuple.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("(r - 1)m' - sum(n) = {0} is odd")]
    NonIntegralBarEll(i64),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
}

/// Failures of the modification calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("rank t1 = {t1} exceeds r - 1 = {max}")]
    RankTooLarge { t1: u32, max: u32 },
    #[error("collection has {0} points; brute force is limited to 9")]
    TooLarge(u32),
    #[error("modification calculus needs r >= 3, got {0}")]
    SmallR(i64),
}

/// Failures of the certificate search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("{0} is neither good nor an axiom")]
    NotGood(Tuple),
    #[error("irreducible: no rule applies to {0} and it is not an axiom")]
    Irreducible(Tuple),
    #[error("search left the configured bounds at {0}")]
    BoundsExceeded(Tuple),
}
