//! Independent oracles for the mechanism's claims.
//!
//! Nothing here reuses the mechanism's reasoning: coalition worths come from
//! exhaustive matching enumeration, core membership from checking every
//! coalition, and the integrality gap from comparing a brute-force integral
//! optimum with the solver's fractional optimum.

mod coalitions;
mod gap;
mod girth;
mod worth;

use thiserror::Error;

pub use coalitions::{
    check_core, CheckMode, CoalitionReport, CoalitionViolation, CoreCheckOptions,
};
pub use gap::{integrality_gap, GapReport};
pub use girth::{guaranteed_alpha, odd_girth};
pub use worth::{worth_bruteforce, worth_table, BruteForceLimits};

use crate::error::InvariantViolation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("refusing {what}: size {size} exceeds the limit of {limit}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("imputation has {got} values but the instance has {expected} vertices")]
    ImputationLength { expected: usize, got: usize },
    #[error("alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(String),
    #[error("coalition contains a vertex outside the instance")]
    CoalitionOutOfRange,
    #[error(transparent)]
    Pipeline(#[from] InvariantViolation),
}
