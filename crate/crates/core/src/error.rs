use thiserror::Error;

use crate::money::Money;

/// A broken optimality or structural invariant somewhere in the pipeline.
///
/// The mechanism only produces these when an upstream result is not what it
/// claims to be (a non-optimal certificate, say), so they are hard failures
/// rather than recoverable conditions. Vertex ids in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("solver certificate rejected: {0}")]
    Certificate(String),
    #[error("degree constraint violated at vertex {vertex}: incident x sums to {total}")]
    Degree { vertex: usize, total: Money },
    #[error("cover infeasible on edge {{{u}, {v}}}: {covered} < {weight}")]
    CoverInfeasible {
        u: usize,
        v: usize,
        covered: Money,
        weight: u64,
    },
    #[error("strong duality fails: weight(x) = {weight}, cover value = {cover}")]
    StrongDuality { weight: Money, cover: Money },
    #[error("normalization changed weight(x) from {before} to {after}")]
    WeightChanged { before: Money, after: Money },
    #[error("alternating matchings of the half-integral {shape} at vertex {start} weigh {first} and {second}")]
    UnequalAlternatives {
        shape: &'static str,
        start: usize,
        first: Money,
        second: Money,
    },
    #[error("half edge {{{u}, {v}}} does not lie on a half-integral odd cycle")]
    StrayHalfEdge { u: usize, v: usize },
    #[error("odd cycle at vertex {start}: {message}")]
    Cycle { start: usize, message: String },
    #[error("imputation: {0}")]
    Imputation(String),
}
