//! Approximate core imputations for the general graph matching game.
//!
//! The pipeline doubles the game graph into a bipartite graph, solves it
//! exactly with an integral primal-dual certificate, folds the result back to
//! an optimal half-integral matching and minimum cover, and scales the cover
//! on half-integral odd cycles to obtain an imputation in the 2/3-approximate
//! core. The [`verification`] module holds independent brute-force oracles.
//!
//! All arithmetic is exact: integer on the doubled graph, [`Money`]
//! (arbitrary-precision rationals) everywhere else.

// Invariant failures carry exact values for diagnostics and only occur on
// hard-failure paths.
#![allow(clippy::result_large_err)]

pub mod bipartite;
pub mod error;
pub mod half_integral;
pub mod instance;
pub mod mechanism;
pub mod money;
pub mod verification;

pub use error::InvariantViolation;
pub use instance::{Coalition, Edge, GameInstance, InstanceError, VertexId};
pub use mechanism::{run_mechanism, ImputationResult};
pub use money::Money;
