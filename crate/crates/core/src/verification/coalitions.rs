use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::worth::{worth_bruteforce, worth_table, BruteForceLimits};
use super::VerifyError;
use crate::instance::{Coalition, GameInstance};
use crate::money::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    /// Only two-agent coalitions `{i, j}` for each edge. Sufficient, since
    /// any coalition's worth is a sum of edge weights over a matching.
    Edges,
    /// Every subset of the agents.
    Exhaustive,
}

impl std::str::FromStr for CheckMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edges" => Ok(CheckMode::Edges),
            "exhaustive" => Ok(CheckMode::Exhaustive),
            other => Err(format!(
                "unknown mode `{other}` (expected edges or exhaustive)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CoreCheckOptions {
    pub mode: CheckMode,
    /// Largest vertex count for exhaustive enumeration.
    pub max_n: usize,
    pub limits: BruteForceLimits,
}

impl Default for CoreCheckOptions {
    fn default() -> Self {
        CoreCheckOptions {
            mode: CheckMode::Exhaustive,
            max_n: 20,
            limits: BruteForceLimits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoalitionViolation {
    #[serde(serialize_with = "one_based")]
    pub coalition: Coalition,
    pub worth: Money,
    pub allocated: Money,
}

fn one_based<S: serde::Serializer>(c: &Coalition, s: S) -> Result<S::Ok, S::Error> {
    c.one_based().serialize(s)
}

fn one_based_list<S: serde::Serializer>(cs: &[Coalition], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(cs.iter().map(|c| c.one_based()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoalitionReport {
    pub alpha: Money,
    pub mode: CheckMode,
    pub checked_count: usize,
    /// Coalitions receiving less than `alpha * p(S)`, in bitmask order.
    pub violations: Vec<CoalitionViolation>,
    /// Coalitions with positive worth receiving exactly `alpha * p(S)`.
    #[serde(serialize_with = "one_based_list")]
    pub tight_coalitions: Vec<Coalition>,
    /// Minimum of allocated / worth over checked coalitions with positive
    /// worth; absent when there are none.
    pub worst_ratio: Option<Money>,
    pub total_allocated: Money,
    pub grand_worth: Money,
    /// Whether the total allocated is at most `p(V)`.
    pub budget_ok: bool,
}

impl CoalitionReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty() && self.budget_ok
    }
}

/// Checks whether `c` lies in the `alpha`-approximate core of `g`: the total
/// handed out is at most `p(V)` and every coalition `S` receives at least
/// `alpha * p(S)`.
pub fn check_core(
    g: &GameInstance,
    c: &[Money],
    alpha: &Money,
    opts: CoreCheckOptions,
) -> Result<CoalitionReport, VerifyError> {
    let n = g.vertex_count();
    if c.len() != n {
        return Err(VerifyError::ImputationLength {
            expected: n,
            got: c.len(),
        });
    }
    if alpha.is_negative() || alpha.is_zero() || *alpha > Money::one() {
        return Err(VerifyError::InvalidAlpha(alpha.to_string()));
    }
    match opts.mode {
        CheckMode::Edges => check_edges(g, c, alpha, opts.limits),
        CheckMode::Exhaustive => check_all(g, c, alpha, opts.max_n),
    }
}

fn check_edges(
    g: &GameInstance,
    c: &[Money],
    alpha: &Money,
    limits: BruteForceLimits,
) -> Result<CoalitionReport, VerifyError> {
    let grand_worth = worth_bruteforce(g, &Coalition::grand(g), limits)?;
    let total_allocated: Money = c.iter().sum();
    let mut violations = Vec::new();
    let mut tight_coalitions = Vec::new();
    let mut worst_ratio: Option<Money> = None;
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&i| g.edge(i).key());
    for i in order {
        let e = g.edge(i);
        let worth = Money::from(e.weight);
        let allocated = &c[e.u] + &c[e.v];
        let required = alpha * &worth;
        let coalition = Coalition::new(vec![e.u, e.v]);
        if allocated < required {
            violations.push(CoalitionViolation {
                coalition,
                worth: worth.clone(),
                allocated: allocated.clone(),
            });
        } else if allocated == required && !worth.is_zero() {
            tight_coalitions.push(coalition);
        }
        if !worth.is_zero() {
            let ratio = &allocated / &worth;
            if worst_ratio.as_ref().is_none_or(|w| ratio < *w) {
                worst_ratio = Some(ratio);
            }
        }
    }
    Ok(CoalitionReport {
        alpha: alpha.clone(),
        mode: CheckMode::Edges,
        checked_count: g.edge_count(),
        violations,
        tight_coalitions,
        worst_ratio,
        budget_ok: total_allocated <= grand_worth,
        total_allocated,
        grand_worth,
    })
}

enum Outcome {
    Violation,
    Tight,
}

fn check_all(
    g: &GameInstance,
    c: &[Money],
    alpha: &Money,
    max_n: usize,
) -> Result<CoalitionReport, VerifyError> {
    let n = g.vertex_count();
    let worth = worth_table(g, max_n)?;

    // Scale the imputation to integers a_i = c_i * D.
    let denom = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = c.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
    let mut sums = vec![BigInt::zero(); 1usize << n];
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &scaled[low];
    }
    let (a_num, a_den) = (alpha.numer(), alpha.denom());

    // sum_S / D >= alpha * p(S)  <=>  sum_S * alpha_den >= alpha_num * p(S) * D
    let classified: Vec<(usize, Outcome)> = (0usize..1 << n)
        .into_par_iter()
        .filter_map(|mask| {
            let lhs = &sums[mask] * a_den;
            let rhs = a_num * BigInt::from(worth[mask]) * &denom;
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Less => Some((mask, Outcome::Violation)),
                std::cmp::Ordering::Equal if worth[mask] > 0 => Some((mask, Outcome::Tight)),
                _ => None,
            }
        })
        .collect();

    // worst ratio: min over p(S) > 0 of sums[S] / (D p(S)), compared by cross-multiplication
    let worst = (0usize..1 << n)
        .into_par_iter()
        .filter(|&m| worth[m] > 0)
        .reduce_with(|a, b| {
            let lhs = &sums[a] * BigInt::from(worth[b]);
            let rhs = &sums[b] * BigInt::from(worth[a]);
            if lhs < rhs || (lhs == rhs && a < b) {
                a
            } else {
                b
            }
        });
    let worst_ratio = worst.map(|m| {
        Money::from(num_rational::BigRational::new(
            sums[m].clone(),
            &denom * BigInt::from(worth[m]),
        ))
    });

    let mut violations = Vec::new();
    let mut tight_coalitions = Vec::new();
    for (mask, outcome) in classified {
        let coalition = Coalition::from_mask(mask as u64);
        match outcome {
            Outcome::Violation => violations.push(CoalitionViolation {
                coalition,
                worth: Money::from_int(worth[mask]),
                allocated: Money::from(num_rational::BigRational::new(
                    sums[mask].clone(),
                    denom.clone(),
                )),
            }),
            Outcome::Tight => tight_coalitions.push(coalition),
        }
    }
    let full = (1usize << n) - 1;
    let grand_worth = Money::from_int(worth[full]);
    let total_allocated: Money = c.iter().sum();
    Ok(CoalitionReport {
        alpha: alpha.clone(),
        mode: CheckMode::Exhaustive,
        checked_count: 1 << n,
        violations,
        tight_coalitions,
        worst_ratio,
        budget_ok: total_allocated <= grand_worth,
        total_allocated,
        grand_worth,
    })
}
