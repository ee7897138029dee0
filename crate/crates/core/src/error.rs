use thiserror::Error;

use crate::measure::Domain;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("interval [{lo}, {hi}) is empty or reversed")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("interval [{lo}, {hi}) lies outside the {domain} domain")]
    OutsideDomain { lo: f64, hi: f64, domain: Domain },
    #[error("expected a {expected} set, got a {found} set")]
    DomainMismatch { expected: Domain, found: Domain },
    #[error("{0} is not a mantissa in [1, 10)")]
    NotAMantissa(String),
    #[error("invalid decimal number {0:?}")]
    InvalidDecimal(String),
    #[error("{value} is not a point of the {digits}-digit grid")]
    OffGrid { value: String, digits: u32 },
    #[error("digit count {n} exceeds the limit of {max}")]
    TooManyDigits { n: u32, max: u32 },
    #[error("digit count must be at least 1")]
    ZeroDigits,
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("unsupported pairing: {0}")]
    UnsupportedPairing(String),
    #[error("quadrature did not converge (estimated error {estimate:e})")]
    NonConvergent { estimate: f64 },
    #[error("winning set covers the whole domain, so no payout is fair")]
    CertainLoss,
    #[error("invalid game matrix: {0}")]
    InvalidMatrix(String),
    #[error("matrix is not balanced: {0}")]
    Unbalanced(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid payout schedule: {0}")]
    InvalidPayout(String),
    #[error("invalid winning set: {0}")]
    InvalidWinningSet(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
