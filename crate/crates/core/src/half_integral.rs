//! Half-integral matchings and covers on the original graph.
//!
//! The doubled-graph certificate folds back to `x_ij = (x_{i'j''} + x_{j'i''}) / 2`
//! and `v_i = v_{i'} + v_{i''}`. We store `x` in doubled units (0, 1 or 2 for
//! x = 0, 1/2, 1). Normalization then rewrites every half-integral path or
//! even cycle as one of its two alternating matchings, leaving half-edges
//! only on vertex-disjoint odd cycles.

use crate::bipartite::{check_certificate, DoubledGraph, PrimalDualCertificate};
use crate::error::InvariantViolation;
use crate::instance::{GameInstance, VertexId};
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegralSolution {
    /// Per edge, `2 * x_ij`.
    x: Vec<u8>,
    v: Vec<Money>,
    normalized: bool,
}

impl HalfIntegralSolution {
    /// Builds a solution from raw parts without checking anything.
    pub fn from_parts(x: Vec<u8>, v: Vec<Money>, normalized: bool) -> Self {
        HalfIntegralSolution { x, v, normalized }
    }

    pub fn doubled_x(&self) -> &[u8] {
        &self.x
    }

    pub fn x(&self, edge: usize) -> Money {
        Money::halves(self.x[edge])
    }

    pub fn cover(&self) -> &[Money] {
        &self.v
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn weight(&self, g: &GameInstance) -> Money {
        let half_units: u128 = g
            .edges()
            .iter()
            .zip(&self.x)
            .map(|(e, &x)| e.weight as u128 * x as u128)
            .sum();
        Money::halves(half_units)
    }

    pub fn cover_value(&self) -> Money {
        self.v.iter().sum()
    }

    pub fn half_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.x
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 1)
            .map(|(i, _)| i)
    }

    pub fn integral_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.x
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 2)
            .map(|(i, _)| i)
    }

    pub fn is_integral(&self) -> bool {
        self.x.iter().all(|&x| x != 1)
    }

    /// Degree constraint, cover feasibility and strong duality, all exact.
    pub fn violations(&self, g: &GameInstance) -> Vec<InvariantViolation> {
        let mut out = Vec::new();
        let n = g.vertex_count();
        if self.x.len() != g.edge_count() || self.v.len() != n {
            out.push(InvariantViolation::Imputation(format!(
                "solution has {} edge values and {} vertex values for a graph with {} edges and {n} vertices",
                self.x.len(),
                self.v.len(),
                g.edge_count()
            )));
            return out;
        }
        let mut degree = vec![0u32; n];
        for (e, &x) in g.edges().iter().zip(&self.x) {
            if x > 2 {
                out.push(InvariantViolation::Degree {
                    vertex: e.u + 1,
                    total: Money::halves(x),
                });
            }
            degree[e.u] += x as u32;
            degree[e.v] += x as u32;
        }
        for (i, &d) in degree.iter().enumerate() {
            if d > 2 {
                out.push(InvariantViolation::Degree {
                    vertex: i + 1,
                    total: Money::halves(d),
                });
            }
        }
        for (i, vi) in self.v.iter().enumerate() {
            if vi.is_negative() {
                out.push(InvariantViolation::Imputation(format!(
                    "cover value {vi} at vertex {} is negative",
                    i + 1
                )));
            }
        }
        for e in g.edges() {
            let covered = &self.v[e.u] + &self.v[e.v];
            if covered < Money::from(e.weight) {
                out.push(InvariantViolation::CoverInfeasible {
                    u: e.u + 1,
                    v: e.v + 1,
                    covered,
                    weight: e.weight,
                });
            }
        }
        let weight = self.weight(g);
        let cover = self.cover_value();
        if weight != cover {
            out.push(InvariantViolation::StrongDuality { weight, cover });
        }
        if self.normalized && out.is_empty() {
            if let Err(err) = odd_cycles_of(g, self) {
                out.push(err);
            }
        }
        out
    }
}

/// Folds an optimal doubled-graph certificate back onto `g`.
pub fn fold_solution(
    g: &GameInstance,
    d: &DoubledGraph,
    cert: &PrimalDualCertificate,
) -> Result<HalfIntegralSolution, InvariantViolation> {
    let problems = check_certificate(d, cert);
    if let Some(first) = problems.first() {
        return Err(InvariantViolation::Certificate(first.to_string()));
    }
    let mut x = vec![0u8; g.edge_count()];
    for &e in &cert.matched {
        x[d.edges()[e].source] += 1;
    }
    let v = (0..g.vertex_count())
        .map(|i| Money::halves(cert.left_duals[i] as u128 + cert.right_duals[i] as u128))
        .collect();
    let s = HalfIntegralSolution {
        x,
        v,
        normalized: false,
    };
    if let Some(err) = s.violations(g).into_iter().next() {
        return Err(err);
    }
    Ok(s)
}

/// Half-edge components: each vertex has at most two incident half-edges,
/// so every component is a path or a cycle.
struct HalfComponent {
    /// Edges in walk order.
    edges: Vec<usize>,
    start: VertexId,
    closed: bool,
}

fn half_components(g: &GameInstance, s: &HalfIntegralSolution) -> Vec<HalfComponent> {
    let n = g.vertex_count();
    let mut half_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in s.half_edges() {
        let edge = g.edge(e);
        half_adj[edge.u].push(e);
        half_adj[edge.v].push(e);
    }
    for (x, list) in half_adj.iter_mut().enumerate() {
        list.sort_by_key(|&e| g.edge(e).other(x));
    }

    let mut vertex_seen = vec![false; n];
    let mut comps = Vec::new();
    let walk = |start: VertexId, vertex_seen: &mut Vec<bool>| {
        let mut edges = Vec::new();
        let mut prev_edge = None;
        let mut at = start;
        vertex_seen[start] = true;
        loop {
            let next = half_adj[at].iter().copied().find(|&e| Some(e) != prev_edge);
            let Some(e) = next else { return (edges, false) };
            edges.push(e);
            at = g.edge(e).other(at);
            if at == start {
                return (edges, true);
            }
            vertex_seen[at] = true;
            prev_edge = Some(e);
        }
    };
    // Paths first, from their lower-id endpoint, then what remains are cycles.
    for x in 0..n {
        if !vertex_seen[x] && half_adj[x].len() == 1 {
            let (edges, closed) = walk(x, &mut vertex_seen);
            debug_assert!(!closed);
            comps.push(HalfComponent {
                edges,
                start: x,
                closed,
            });
        }
    }
    for x in 0..n {
        if !vertex_seen[x] && half_adj[x].len() == 2 {
            let (edges, closed) = walk(x, &mut vertex_seen);
            debug_assert!(closed);
            comps.push(HalfComponent {
                edges,
                start: x,
                closed,
            });
        }
    }
    comps.sort_by_key(|c| c.start);
    comps
}

/// Rewrites half-integral paths and even cycles as integral matchings.
pub fn normalize(
    g: &GameInstance,
    s: &HalfIntegralSolution,
) -> Result<HalfIntegralSolution, InvariantViolation> {
    if let Some(err) = s.violations(g).into_iter().next() {
        return Err(err);
    }
    let before = s.weight(g);
    let mut x = s.x.clone();
    for comp in half_components(g, s) {
        if comp.closed && comp.edges.len() % 2 == 1 {
            continue;
        }
        // A 2-cycle would need a repeated edge.
        assert!(
            !comp.closed || comp.edges.len() >= 4,
            "half-integral 2-cycle"
        );
        let mut first = Money::zero();
        let mut second = Money::zero();
        for (pos, &e) in comp.edges.iter().enumerate() {
            if pos % 2 == 0 {
                first += g.weight_money(e);
            } else {
                second += g.weight_money(e);
            }
        }
        if first != second {
            return Err(InvariantViolation::UnequalAlternatives {
                shape: if comp.closed { "even cycle" } else { "path" },
                start: comp.start + 1,
                first,
                second,
            });
        }
        for (pos, &e) in comp.edges.iter().enumerate() {
            x[e] = if pos % 2 == 0 { 2 } else { 0 };
        }
    }
    let out = HalfIntegralSolution {
        x,
        v: s.v.clone(),
        normalized: true,
    };
    let after = out.weight(g);
    if after != before {
        return Err(InvariantViolation::WeightChanged { before, after });
    }
    if let Some(err) = out.violations(g).into_iter().next() {
        return Err(err);
    }
    Ok(out)
}

/// A half-integral odd cycle `i_1, ..., i_{2k+1}` of a normalized solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycle {
    vertices: Vec<VertexId>,
    /// `edges[p]` joins `vertices[p]` and `vertices[p + 1]` (cyclically).
    edges: Vec<usize>,
    k: usize,
    edge_weight: Money,
    cover_value: Money,
}

impl OddCycle {
    /// Builds the cycle through `vertices` in order and totals its edge
    /// weight `w_C` and cover value `v_C`.
    pub fn new(
        g: &GameInstance,
        vertices: Vec<VertexId>,
        cover: &[Money],
    ) -> Result<Self, InvariantViolation> {
        let start = vertices.first().map_or(0, |&x| x + 1);
        let len = vertices.len();
        if len < 3 || len.is_multiple_of(2) {
            return Err(InvariantViolation::Cycle {
                start,
                message: format!("length {len} is not odd and at least 3"),
            });
        }
        let mut edges = Vec::with_capacity(len);
        for p in 0..len {
            let (a, b) = (vertices[p], vertices[(p + 1) % len]);
            let e = g.find_edge(a, b).ok_or_else(|| InvariantViolation::Cycle {
                start,
                message: format!("vertices {} and {} are not adjacent", a + 1, b + 1),
            })?;
            edges.push(e);
        }
        let edge_weight = edges.iter().map(|&e| g.weight_money(e)).sum();
        let cover_value = vertices.iter().map(|&x| &cover[x]).sum();
        Ok(OddCycle {
            vertices,
            edges,
            k: (len - 1) / 2,
            edge_weight,
            cover_value,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `w_C`, the total weight of the cycle's edges.
    pub fn edge_weight(&self) -> &Money {
        &self.edge_weight
    }

    /// `v_C`, the total cover value on the cycle's vertices.
    pub fn cover_value(&self) -> &Money {
        &self.cover_value
    }

    /// `w_C = 2 v_C`, which holds whenever every cycle edge is tight.
    pub fn check_weight_identity(&self) -> Result<(), InvariantViolation> {
        if self.edge_weight != Money::from_int(2) * &self.cover_value {
            return Err(InvariantViolation::Cycle {
                start: self.vertices[0] + 1,
                message: format!("w_C = {} but v_C = {}", self.edge_weight, self.cover_value),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalComponents {
    pub odd_cycles: Vec<OddCycle>,
    pub integral_edges: Vec<usize>,
}

fn odd_cycles_of(
    g: &GameInstance,
    s: &HalfIntegralSolution,
) -> Result<Vec<OddCycle>, InvariantViolation> {
    let mut cycles = Vec::new();
    for comp in half_components(g, s) {
        if !comp.closed || comp.edges.len() % 2 == 0 {
            let e = g.edge(comp.edges[0]);
            return Err(InvariantViolation::StrayHalfEdge {
                u: e.u + 1,
                v: e.v + 1,
            });
        }
        let mut vertices = Vec::with_capacity(comp.edges.len());
        let mut at = comp.start;
        for &e in &comp.edges {
            vertices.push(at);
            at = g.edge(e).other(at);
        }
        cycles.push(OddCycle::new(g, vertices, &s.v)?);
    }
    Ok(cycles)
}

/// Splits a normalized solution into its half-integral odd cycles and its
/// integral edges, checking `w_C = 2 v_C` on every cycle.
pub fn decompose_components(
    g: &GameInstance,
    s: &HalfIntegralSolution,
) -> Result<FractionalComponents, InvariantViolation> {
    if !s.normalized {
        return Err(InvariantViolation::Imputation(
            "decomposition requires a normalized solution".into(),
        ));
    }
    let odd_cycles = odd_cycles_of(g, s)?;
    for c in &odd_cycles {
        c.check_weight_identity()?;
    }
    Ok(FractionalComponents {
        odd_cycles,
        integral_edges: s.integral_edges().collect(),
    })
}
