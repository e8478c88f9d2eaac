use serde::Serialize;

use super::worth::{worth_bruteforce, BruteForceLimits};
use super::VerifyError;
use crate::instance::{Coalition, GameInstance};
use crate::mechanism::optimal_half_integral;
use crate::money::Money;

/// Integral versus fractional optimum of the matching LP on one instance.
///
/// The integral side is brute force and may be refused; the fractional side
/// always comes from the exact solver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub opt_integral: Option<Money>,
    pub opt_fractional: Money,
    /// `opt_integral / opt_fractional`, or 1 when both are zero.
    pub ratio: Option<Money>,
    /// The core is nonempty exactly when the LP has an integral optimum.
    /// `None` when the integral optimum was not computed.
    #[serde(serialize_with = "tri_state")]
    pub core_nonempty: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
}

fn tri_state<S: serde::Serializer>(v: &Option<bool>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_bool(*b),
        None => s.serialize_str("unknown"),
    }
}

pub fn integrality_gap(
    g: &GameInstance,
    limits: BruteForceLimits,
) -> Result<GapReport, VerifyError> {
    let (_, solution) = optimal_half_integral(g)?;
    let opt_fractional = solution.weight(g);
    match worth_bruteforce(g, &Coalition::grand(g), limits) {
        Ok(opt_integral) => {
            let ratio = if opt_fractional.is_zero() {
                Money::one()
            } else {
                &opt_integral / &opt_fractional
            };
            Ok(GapReport {
                core_nonempty: Some(opt_integral == opt_fractional),
                opt_integral: Some(opt_integral),
                opt_fractional,
                ratio: Some(ratio),
                refusal: None,
            })
        }
        Err(err @ VerifyError::BoundExceeded { .. }) => Ok(GapReport {
            opt_integral: None,
            opt_fractional,
            ratio: None,
            core_nonempty: None,
            refusal: Some(err.to_string()),
        }),
        Err(err) => Err(err),
    }
}
