//! The 2/3-approximate core imputation.
//!
//! Given an optimal half-integral matching `x` whose half-edges form odd
//! cycles and a minimum cover `v`, every vertex on a half-integral cycle of
//! length `2k + 1` keeps the fraction `2k / (2k + 1)` of its cover value and
//! every other vertex keeps all of it. The integral matching `T` takes the
//! edges with `x = 1` plus, on each odd cycle, the heaviest of the `2k + 1`
//! alternating matchings that skip one cycle vertex.

use serde::{Deserialize, Serialize};

use crate::bipartite::{check_certificate, double_graph, solve_bipartite, PrimalDualCertificate};
use crate::error::InvariantViolation;
use crate::half_integral::{
    decompose_components, fold_solution, normalize, FractionalComponents, HalfIntegralSolution,
    OddCycle,
};
use crate::instance::{GameInstance, VertexId};
use crate::money::Money;

/// The `k` alternating edges of an odd cycle once `removed` is deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingMatching {
    pub removed: VertexId,
    pub edges: Vec<usize>,
    pub weight: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleAnalysis {
    pub cycle: OddCycle,
    /// Entry `p` skips `cycle.vertices()[p]`.
    pub matchings: Vec<AlternatingMatching>,
    pub heaviest_index: usize,
    pub heaviest_weight: Money,
}

impl CycleAnalysis {
    pub fn heaviest(&self) -> &AlternatingMatching {
        &self.matchings[self.heaviest_index]
    }

    /// Every per-cycle identity, checked exactly against `cover`.
    pub fn violations(&self, g: &GameInstance, cover: &[Money]) -> Vec<InvariantViolation> {
        let c = &self.cycle;
        let start = c.vertices()[0] + 1;
        let fail = |message: String| InvariantViolation::Cycle { start, message };
        let mut out = Vec::new();
        if let Err(e) = c.check_weight_identity() {
            out.push(e);
        }
        let k = c.k();
        if self.matchings.len() != c.len() {
            out.push(fail(format!(
                "{} alternating matchings for a cycle of length {}",
                self.matchings.len(),
                c.len()
            )));
            return out;
        }
        let on_cycle = |e: usize| c.edges().contains(&e);
        for (p, m) in self.matchings.iter().enumerate() {
            let removed = c.vertices()[p];
            if m.removed != removed {
                out.push(fail(format!("matching {p} skips the wrong vertex")));
            }
            if m.edges.len() != k || !m.edges.iter().all(|&e| on_cycle(e)) {
                out.push(fail(format!("matching {p} is not {k} cycle edges")));
            }
            let mut covered: Vec<VertexId> = m
                .edges
                .iter()
                .flat_map(|&e| [g.edge(e).u, g.edge(e).v])
                .collect();
            covered.sort_unstable();
            let mut others: Vec<VertexId> = c
                .vertices()
                .iter()
                .copied()
                .filter(|&x| x != removed)
                .collect();
            others.sort_unstable();
            if covered != others {
                out.push(fail(format!(
                    "matching {p} does not match every cycle vertex except {}",
                    removed + 1
                )));
            }
            let weight: Money = m.edges.iter().map(|&e| g.weight_money(e)).sum();
            if weight != m.weight {
                out.push(fail(format!(
                    "matching {p} weight recorded as {} but is {weight}",
                    m.weight
                )));
            }
            // unique cover of the cycle: v_{i_j} = v_C - w(M_j)
            let expected = c.cover_value() - &m.weight;
            if cover[removed] != expected {
                out.push(fail(format!(
                    "v at vertex {} is {} but v_C - w(M_j) = {expected}",
                    removed + 1,
                    cover[removed]
                )));
            }
        }
        let two_k = Money::from(2 * k as u64);
        let total: Money = self.matchings.iter().map(|m| &m.weight).sum();
        if total != &two_k * c.cover_value() {
            out.push(fail(format!(
                "sum of w(M_j) = {total} but 2k * v_C = {}",
                &two_k * c.cover_value()
            )));
        }
        if self.heaviest_index >= self.matchings.len()
            || self.matchings[self.heaviest_index].weight != self.heaviest_weight
            || self
                .matchings
                .iter()
                .any(|m| m.weight > self.heaviest_weight)
        {
            out.push(fail("heaviest matching is not the maximum".into()));
        }
        let lhs = Money::from(c.len() as u64) * &self.heaviest_weight;
        let rhs = &two_k * c.cover_value();
        if lhs < rhs {
            out.push(fail(format!("(2k+1) w(M') = {lhs} < 2k v_C = {rhs}")));
        }
        out
    }
}

/// Index of the heaviest matching, ties going to the smallest removed vertex.
pub fn heaviest_tiebreak(matchings: &[AlternatingMatching]) -> usize {
    assert!(!matchings.is_empty(), "no matchings to choose from");
    let mut best = 0;
    for (i, m) in matchings.iter().enumerate().skip(1) {
        let b = &matchings[best];
        if m.weight > b.weight || (m.weight == b.weight && m.removed < b.removed) {
            best = i;
        }
    }
    best
}

pub fn analyze_cycle(
    g: &GameInstance,
    cycle: &OddCycle,
    cover: &[Money],
) -> Result<CycleAnalysis, InvariantViolation> {
    let len = cycle.len();
    let matchings: Vec<AlternatingMatching> = (0..len)
        .map(|p| {
            // the path i_{p+1} .. i_{p-1}; take its 1st, 3rd, ... edges
            let edges: Vec<usize> = (0..cycle.k())
                .map(|t| cycle.edges()[(p + 1 + 2 * t) % len])
                .collect();
            let weight = edges.iter().map(|&e| g.weight_money(e)).sum();
            AlternatingMatching {
                removed: cycle.vertices()[p],
                edges,
                weight,
            }
        })
        .collect();
    let heaviest_index = heaviest_tiebreak(&matchings);
    let analysis = CycleAnalysis {
        cycle: cycle.clone(),
        heaviest_weight: matchings[heaviest_index].weight.clone(),
        matchings,
        heaviest_index,
    };
    match analysis.violations(g, cover).into_iter().next() {
        Some(err) => Err(err),
        None => Ok(analysis),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingProfile {
    factors: Vec<Money>,
}

impl ScalingProfile {
    pub fn factors(&self) -> &[Money] {
        &self.factors
    }

    pub fn factor(&self, i: VertexId) -> &Money {
        &self.factors[i]
    }

    /// Smallest factor; 1 when there are no vertices.
    pub fn min(&self) -> Money {
        self.factors
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(Money::one)
    }
}

pub fn scaling_profile(g: &GameInstance, comps: &FractionalComponents) -> ScalingProfile {
    let mut factors = vec![Money::one(); g.vertex_count()];
    for c in &comps.odd_cycles {
        let f = Money::ratio(2 * c.k() as u64, c.len() as u64);
        for &x in c.vertices() {
            factors[x] = f.clone();
        }
    }
    ScalingProfile { factors }
}

/// Output of the mechanism together with the intermediate objects that
/// justify it.
#[derive(Debug, Clone)]
pub struct ImputationResult {
    /// The imputation `c`.
    pub values: Vec<Money>,
    /// The integral matching `T`, as ascending edge indices.
    pub matching: Vec<usize>,
    pub profile: ScalingProfile,
    pub certificate: PrimalDualCertificate,
    /// Normalized half-integral optimum and its minimum cover.
    pub solution: HalfIntegralSolution,
    pub cycles: Vec<CycleAnalysis>,
    pub worth_fractional: Money,
    pub matching_weight: Money,
    pub allocated: Money,
    pub factor_guarantee: Money,
}

impl ImputationResult {
    pub fn cover(&self) -> &[Money] {
        self.solution.cover()
    }

    /// `w(T) - sum(c)`, the part of the matching's worth left unallocated.
    pub fn slack(&self) -> Money {
        &self.matching_weight - &self.allocated
    }

    /// Re-derives every invariant of the pipeline from the stored pieces.
    pub fn audit(&self, g: &GameInstance) -> Vec<InvariantViolation> {
        let mut out = Vec::new();
        let n = g.vertex_count();
        let d = double_graph(g);
        out.extend(
            check_certificate(&d, &self.certificate)
                .into_iter()
                .map(|v| InvariantViolation::Certificate(v.to_string())),
        );
        out.extend(self.solution.violations(g));
        if !self.solution.is_normalized() {
            out.push(InvariantViolation::Imputation(
                "solution not normalized".into(),
            ));
        }
        if !out.is_empty() {
            return out;
        }
        let cover = self.cover();
        if self.worth_fractional != self.solution.weight(g) {
            out.push(InvariantViolation::Imputation(
                "fractional optimum mismatch".into(),
            ));
        }
        for a in &self.cycles {
            out.extend(a.violations(g, cover));
        }

        let mut expected_f = vec![Money::one(); n];
        for a in &self.cycles {
            for &x in a.cycle.vertices() {
                expected_f[x] = Money::ratio(2 * a.cycle.k() as u64, a.cycle.len() as u64);
            }
        }
        if self.profile.factors() != expected_f.as_slice() {
            out.push(InvariantViolation::Imputation(
                "scaling profile mismatch".into(),
            ));
        }
        if self.profile.min() < Money::ratio(2, 3) || self.factor_guarantee != self.profile.min() {
            out.push(InvariantViolation::Imputation(
                "factor guarantee mismatch".into(),
            ));
        }
        for (i, (c, v)) in self.values.iter().zip(cover).enumerate() {
            if *c != self.profile.factor(i) * v {
                out.push(InvariantViolation::Imputation(format!(
                    "c at vertex {} is not f * v",
                    i + 1
                )));
            }
        }

        let mut used = vec![false; n];
        for &e in &self.matching {
            for x in [g.edge(e).u, g.edge(e).v] {
                if std::mem::replace(&mut used[x], true) {
                    out.push(InvariantViolation::Imputation(format!(
                        "T uses vertex {} twice",
                        x + 1
                    )));
                }
            }
        }
        let w_t: Money = self.matching.iter().map(|&e| g.weight_money(e)).sum();
        let allocated: Money = self.values.iter().sum();
        if w_t != self.matching_weight || allocated != self.allocated {
            out.push(InvariantViolation::Imputation(
                "recorded totals are stale".into(),
            ));
        }
        if allocated > w_t {
            out.push(InvariantViolation::Imputation(format!(
                "allocated {allocated} exceeds w(T) = {w_t}"
            )));
        }

        let two = Money::from_int(2);
        let three = Money::from_int(3);
        for e in g.edges() {
            let w = Money::from(e.weight);
            let got = &self.values[e.u] + &self.values[e.v];
            if &three * &got < &two * &w {
                out.push(InvariantViolation::Imputation(format!(
                    "edge {{{}, {}}} covered {got} < 2/3 of {w}",
                    e.u + 1,
                    e.v + 1
                )));
            }
            let local = self
                .profile
                .factor(e.u)
                .min(self.profile.factor(e.v))
                .clone();
            if got < &local * &w || got < &self.factor_guarantee * &w {
                out.push(InvariantViolation::Imputation(format!(
                    "edge {{{}, {}}} covered {got} < {local} of {w}",
                    e.u + 1,
                    e.v + 1
                )));
            }
        }
        out
    }

    pub fn report(&self, g: &GameInstance) -> ImputationReport {
        ImputationReport {
            values: self.values.clone(),
            matching: self
                .matching
                .iter()
                .map(|&e| {
                    let (a, b) = g.edge(e).key();
                    [a + 1, b + 1]
                })
                .collect(),
            factors: self.profile.factors().to_vec(),
            allocated: self.allocated.clone(),
            matching_weight: self.matching_weight.clone(),
            fractional_optimum: self.worth_fractional.clone(),
            factor_guarantee: self.factor_guarantee.clone(),
            cover: self.cover().to_vec(),
        }
    }
}

/// JSON form of an [`ImputationResult`]. Vertex ids are 1-based and every
/// value is a reduced fraction string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImputationReport {
    pub values: Vec<Money>,
    pub matching: Vec<[usize; 2]>,
    pub factors: Vec<Money>,
    pub allocated: Money,
    pub matching_weight: Money,
    pub fractional_optimum: Money,
    pub factor_guarantee: Money,
    /// The unscaled minimum cover `v`.
    pub cover: Vec<Money>,
}

/// Solves the fractional matching LP and its dual exactly, with `x`
/// half-integral and normalized.
pub fn optimal_half_integral(
    g: &GameInstance,
) -> Result<(PrimalDualCertificate, HalfIntegralSolution), InvariantViolation> {
    let d = double_graph(g);
    let cert = solve_bipartite(&d);
    let folded = fold_solution(g, &d, &cert)?;
    Ok((cert, normalize(g, &folded)?))
}

/// Runs the whole mechanism on `g`, failing if any invariant along the way
/// does not hold.
pub fn run_mechanism(g: &GameInstance) -> Result<ImputationResult, InvariantViolation> {
    let (certificate, solution) = optimal_half_integral(g)?;
    let comps = decompose_components(g, &solution)?;
    let cover = solution.cover();
    let cycles = comps
        .odd_cycles
        .iter()
        .map(|c| analyze_cycle(g, c, cover))
        .collect::<Result<Vec<_>, _>>()?;
    let profile = scaling_profile(g, &comps);
    let values: Vec<Money> = (0..g.vertex_count())
        .map(|i| profile.factor(i) * &cover[i])
        .collect();

    let mut matching = comps.integral_edges.clone();
    for a in &cycles {
        matching.extend_from_slice(&a.heaviest().edges);
    }
    matching.sort_unstable();

    let result = ImputationResult {
        allocated: values.iter().sum(),
        matching_weight: matching.iter().map(|&e| g.weight_money(e)).sum(),
        worth_fractional: solution.weight(g),
        factor_guarantee: profile.min(),
        values,
        matching,
        profile,
        certificate,
        solution,
        cycles,
    };
    match result.audit(g).into_iter().next() {
        Some(err) => Err(err),
        None => Ok(result),
    }
}
