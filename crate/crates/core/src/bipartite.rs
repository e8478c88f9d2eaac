//! Vertex doubling and exact maximum-weight bipartite matching.
//!
//! Each agent `i` becomes a primed copy `i'` (left side) and a double-primed
//! copy `i''` (right side); each edge `(i, j, w)` becomes `(i', j'')` and
//! `(j', i'')`, each worth `w / 2`. Weights and duals on the doubled graph are
//! kept in half-units, so the stored weight of a doubled edge is `w` itself and
//! everything in this module is integer arithmetic.
//!
//! The solver is a Hungarian-style primal-dual method for the `<=` form of the
//! assignment LP: left duals start at the largest incident weight, right duals
//! at zero, and each free left vertex is processed once, either reaching a free
//! right vertex (augment) or driving some tree vertex's dual to zero (flip the
//! alternating path so that vertex ends up free with a zero dual).

use std::fmt;

use crate::instance::{GameInstance, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Primed,
    DoublePrimed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubledVertex {
    pub original: VertexId,
    pub side: Side,
}

impl fmt::Display for DoubledVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Primed => write!(f, "{}'", self.original + 1),
            Side::DoublePrimed => write!(f, "{}''", self.original + 1),
        }
    }
}

/// An edge `(left', right'')` of the doubled graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubledEdge {
    pub left: VertexId,
    pub right: VertexId,
    /// Half-units: equals the original integer weight.
    pub weight: u64,
    /// Index of the originating edge in the game instance.
    pub source: usize,
}

#[derive(Debug, Clone)]
pub struct DoubledGraph {
    vertex_count: usize,
    edges: Vec<DoubledEdge>,
    left_adj: Vec<Vec<usize>>,
}

impl DoubledGraph {
    /// Number of original vertices; each side has this many.
    pub fn side_size(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[DoubledEdge] {
        &self.edges
    }

    pub fn left_of(&self, i: VertexId) -> DoubledVertex {
        DoubledVertex {
            original: i,
            side: Side::Primed,
        }
    }

    pub fn right_of(&self, i: VertexId) -> DoubledVertex {
        DoubledVertex {
            original: i,
            side: Side::DoublePrimed,
        }
    }

    /// Doubled edge indices leaving left vertex `i`, ascending by right id.
    pub fn left_adjacency(&self, i: VertexId) -> &[usize] {
        &self.left_adj[i]
    }

    /// Dense vertex numbering: primed copies `0..n`, double-primed `n..2n`.
    pub fn flat_index(&self, x: DoubledVertex) -> usize {
        match x.side {
            Side::Primed => x.original,
            Side::DoublePrimed => self.vertex_count + x.original,
        }
    }
}

pub fn double_graph(g: &GameInstance) -> DoubledGraph {
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for (idx, e) in g.edges().iter().enumerate() {
        edges.push(DoubledEdge {
            left: e.u,
            right: e.v,
            weight: e.weight,
            source: idx,
        });
        edges.push(DoubledEdge {
            left: e.v,
            right: e.u,
            weight: e.weight,
            source: idx,
        });
    }
    let mut left_adj = vec![Vec::new(); n];
    for (idx, e) in edges.iter().enumerate() {
        left_adj[e.left].push(idx);
    }
    for list in &mut left_adj {
        list.sort_by_key(|&i| edges[i].right);
    }
    DoubledGraph {
        vertex_count: n,
        edges,
        left_adj,
    }
}

/// A 0/1 matching of the doubled graph together with an integral cover,
/// both in half-units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalDualCertificate {
    /// Indices into [`DoubledGraph::edges`], ascending.
    pub matched: Vec<usize>,
    pub left_duals: Vec<u64>,
    pub right_duals: Vec<u64>,
}

impl PrimalDualCertificate {
    pub fn matched_weight(&self, d: &DoubledGraph) -> u128 {
        self.matched
            .iter()
            .map(|&e| d.edges[e].weight as u128)
            .sum()
    }

    pub fn dual_total(&self) -> u128 {
        self.left_duals
            .iter()
            .chain(&self.right_duals)
            .map(|&x| x as u128)
            .sum()
    }

    pub fn dual(&self, x: DoubledVertex) -> u64 {
        match x.side {
            Side::Primed => self.left_duals[x.original],
            Side::DoublePrimed => self.right_duals[x.original],
        }
    }
}

struct Solver<'a> {
    d: &'a DoubledGraph,
    u: Vec<i128>,
    v: Vec<i128>,
    mate_left: Vec<Option<usize>>,
    mate_right: Vec<Option<usize>>,
}

impl<'a> Solver<'a> {
    fn new(d: &'a DoubledGraph) -> Self {
        let n = d.vertex_count;
        let u = (0..n)
            .map(|i| {
                d.left_adj[i]
                    .iter()
                    .map(|&e| d.edges[e].weight as i128)
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        Solver {
            d,
            u,
            v: vec![0; n],
            mate_left: vec![None; n],
            mate_right: vec![None; n],
        }
    }

    fn run(mut self) -> PrimalDualCertificate {
        for s in 0..self.d.vertex_count {
            if self.u[s] > 0 {
                self.phase(s);
            }
        }
        let mut matched: Vec<usize> = self.mate_left.iter().flatten().copied().collect();
        matched.sort_unstable();
        let to_u64 = |x: &i128| u64::try_from(*x).expect("duals stay within [0, max weight]");
        PrimalDualCertificate {
            matched,
            left_duals: self.u.iter().map(to_u64).collect(),
            right_duals: self.v.iter().map(to_u64).collect(),
        }
    }

    /// Rematches along tree edges from right vertex `j` back to the root `s`.
    fn rematch_from(&mut self, mut j: VertexId, parent: &[Option<usize>], s: VertexId) {
        loop {
            let e = parent[j].expect("tree right vertex has a parent edge");
            let l = self.d.edges[e].left;
            let old = self.mate_left[l];
            self.mate_left[l] = Some(e);
            self.mate_right[j] = Some(e);
            if l == s {
                return;
            }
            j = self.d.edges[old.expect("non-root tree left vertex is matched")].right;
        }
    }

    fn phase(&mut self, s: VertexId) {
        let n = self.d.vertex_count;
        let mut tree = Tree::new(n);
        tree.add_left(self.d, s, &self.u, &self.v);

        loop {
            let mut best: Option<(i128, VertexId)> = None;
            for j in 0..n {
                let sl = tree.slack[j];
                if !tree.right[j] && sl != i128::MAX && best.is_none_or(|(b, _)| sl < b) {
                    best = Some((sl, j));
                }
            }

            if let Some((0, j)) = best {
                tree.right[j] = true;
                match self.mate_right[j] {
                    None => {
                        self.rematch_from(j, &tree.slack_edge, s);
                        return;
                    }
                    Some(me) => {
                        let i = self.d.edges[me].left;
                        tree.add_left(self.d, i, &self.u, &self.v);
                    }
                }
                continue;
            }

            let dual_floor = tree.members.iter().map(|&i| self.u[i]).min().unwrap();
            let delta = best.map_or(i128::MAX, |(b, _)| b).min(dual_floor);
            for &i in &tree.members {
                self.u[i] -= delta;
            }
            for j in 0..n {
                if tree.right[j] {
                    self.v[j] += delta;
                } else if tree.slack[j] != i128::MAX {
                    tree.slack[j] -= delta;
                }
            }
            if delta == dual_floor {
                if self.u[s] == 0 {
                    return;
                }
                let i = *tree
                    .members
                    .iter()
                    .filter(|&&i| self.u[i] == 0)
                    .min()
                    .unwrap();
                // i is matched; free it and shift mates back along the tree path to s.
                let me = self.mate_left[i].take().unwrap();
                let j = self.d.edges[me].right;
                self.mate_right[j] = None;
                self.rematch_from(j, &tree.slack_edge, s);
                return;
            }
        }
    }
}

/// Alternating tree of one phase, with the smallest slack from the tree's
/// left vertices to each right vertex outside it.
struct Tree {
    left: Vec<bool>,
    right: Vec<bool>,
    members: Vec<VertexId>,
    slack: Vec<i128>,
    slack_edge: Vec<Option<usize>>,
}

impl Tree {
    fn new(n: usize) -> Self {
        Tree {
            left: vec![false; n],
            right: vec![false; n],
            members: Vec::new(),
            slack: vec![i128::MAX; n],
            slack_edge: vec![None; n],
        }
    }

    fn add_left(&mut self, d: &DoubledGraph, i: VertexId, u: &[i128], v: &[i128]) {
        debug_assert!(!self.left[i]);
        self.left[i] = true;
        self.members.push(i);
        for &e in &d.left_adj[i] {
            let de = &d.edges[e];
            if self.right[de.right] {
                continue;
            }
            let sl = u[i] + v[de.right] - de.weight as i128;
            if sl < self.slack[de.right] {
                self.slack[de.right] = sl;
                self.slack_edge[de.right] = Some(e);
            }
        }
    }
}

/// Maximum-weight matching of the doubled graph with an optimal integral cover.
pub fn solve_bipartite(d: &DoubledGraph) -> PrimalDualCertificate {
    Solver::new(d).run()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateViolation {
    Shape(String),
    /// A doubled vertex lies in more than one matched edge.
    NotAMatching {
        vertex: DoubledVertex,
    },
    /// `dual(left) + dual(right) < weight`.
    DualInfeasible {
        edge: usize,
    },
    /// A matched edge is not tight.
    MatchedNotTight {
        edge: usize,
    },
    /// A vertex with positive dual is unmatched.
    UnmatchedPositiveDual {
        vertex: DoubledVertex,
        dual: u64,
    },
    StrongDuality {
        primal: u128,
        dual: u128,
    },
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape(msg) => write!(f, "malformed certificate: {msg}"),
            Self::NotAMatching { vertex } => {
                write!(f, "primal feasibility: {vertex} matched twice")
            }
            Self::DualInfeasible { edge } => {
                write!(f, "dual feasibility: doubled edge #{edge} uncovered")
            }
            Self::MatchedNotTight { edge } => {
                write!(f, "CS-1: matched doubled edge #{edge} not tight")
            }
            Self::UnmatchedPositiveDual { vertex, dual } => {
                write!(f, "CS-2: {vertex} has dual {dual} but is unmatched")
            }
            Self::StrongDuality { primal, dual } => {
                write!(
                    f,
                    "strong duality: matched weight {primal} != dual total {dual}"
                )
            }
        }
    }
}

/// Checks primal and dual feasibility, both complementary slackness
/// conditions and strong duality. An empty result means the certificate
/// proves optimality.
pub fn check_certificate(
    d: &DoubledGraph,
    cert: &PrimalDualCertificate,
) -> Vec<CertificateViolation> {
    let n = d.vertex_count;
    let mut out = Vec::new();
    if cert.left_duals.len() != n || cert.right_duals.len() != n {
        out.push(CertificateViolation::Shape(format!(
            "expected {n} duals per side, got {} and {}",
            cert.left_duals.len(),
            cert.right_duals.len()
        )));
        return out;
    }
    if let Some(&bad) = cert.matched.iter().find(|&&e| e >= d.edges.len()) {
        out.push(CertificateViolation::Shape(format!(
            "edge index {bad} out of range"
        )));
        return out;
    }

    let mut left_used = vec![0usize; n];
    let mut right_used = vec![0usize; n];
    let mut is_matched = vec![false; d.edges.len()];
    for &e in &cert.matched {
        let de = &d.edges[e];
        left_used[de.left] += 1;
        right_used[de.right] += 1;
        is_matched[e] = true;
    }
    for i in 0..n {
        if left_used[i] > 1 {
            out.push(CertificateViolation::NotAMatching {
                vertex: d.left_of(i),
            });
        }
        if right_used[i] > 1 {
            out.push(CertificateViolation::NotAMatching {
                vertex: d.right_of(i),
            });
        }
    }
    for (idx, de) in d.edges.iter().enumerate() {
        let cover = cert.left_duals[de.left] as u128 + cert.right_duals[de.right] as u128;
        let w = de.weight as u128;
        if cover < w {
            out.push(CertificateViolation::DualInfeasible { edge: idx });
        } else if is_matched[idx] && cover != w {
            out.push(CertificateViolation::MatchedNotTight { edge: idx });
        }
    }
    for i in 0..n {
        if cert.left_duals[i] > 0 && left_used[i] == 0 {
            out.push(CertificateViolation::UnmatchedPositiveDual {
                vertex: d.left_of(i),
                dual: cert.left_duals[i],
            });
        }
        if cert.right_duals[i] > 0 && right_used[i] == 0 {
            out.push(CertificateViolation::UnmatchedPositiveDual {
                vertex: d.right_of(i),
                dual: cert.right_duals[i],
            });
        }
    }
    let primal = cert.matched_weight(d);
    let dual = cert.dual_total();
    if primal != dual {
        out.push(CertificateViolation::StrongDuality { primal, dual });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_odd_cycle, gen_random, Edge, EdgeProbability};

    fn single_edge() -> GameInstance {
        GameInstance::new(2, vec![Edge::new(0, 1, 5)]).unwrap()
    }

    /// Exhaustive maximum over all matchings of the doubled graph.
    fn brute_max(d: &DoubledGraph) -> u128 {
        fn go(d: &DoubledGraph, idx: usize, used_l: u64, used_r: u64) -> u128 {
            if idx == d.edges.len() {
                return 0;
            }
            let skip = go(d, idx + 1, used_l, used_r);
            let e = &d.edges[idx];
            if used_l >> e.left & 1 == 0 && used_r >> e.right & 1 == 0 {
                let take =
                    e.weight as u128 + go(d, idx + 1, used_l | 1 << e.left, used_r | 1 << e.right);
                skip.max(take)
            } else {
                skip
            }
        }
        go(d, 0, 0, 0)
    }

    #[test]
    fn doubled_k3_is_six_cycle() {
        let d = double_graph(&gen_odd_cycle(1, 1).unwrap());
        assert_eq!(d.edges().len(), 6);
        assert!(d.edges().iter().all(|e| e.weight == 1));
        // every doubled vertex has degree 2 and the graph is connected: a 6-cycle
        let mut deg = [0; 6];
        for e in d.edges() {
            deg[d.flat_index(d.left_of(e.left))] += 1;
            deg[d.flat_index(d.right_of(e.right))] += 1;
        }
        assert!(deg.iter().all(|&x| x == 2));
    }

    #[test]
    fn doubled_single_edge() {
        let d = double_graph(&single_edge());
        let pairs: Vec<_> = d
            .edges()
            .iter()
            .map(|e| (e.left, e.right, e.weight))
            .collect();
        assert_eq!(pairs, vec![(0, 1, 5), (1, 0, 5)]);
    }

    #[test]
    fn k3_solution() {
        let d = double_graph(&gen_odd_cycle(1, 1).unwrap());
        let cert = solve_bipartite(&d);
        assert_eq!(brute_max(&d), 3);
        assert_eq!(cert.matched_weight(&d), 3);
        assert_eq!(cert.dual_total(), 3);
        assert!(check_certificate(&d, &cert).is_empty());
    }

    #[test]
    fn single_edge_solution() {
        let d = double_graph(&single_edge());
        let cert = solve_bipartite(&d);
        assert_eq!(brute_max(&d), 10);
        assert_eq!(cert.matched, vec![0, 1]);
        assert_eq!(cert.matched_weight(&d), 10);
        assert!(check_certificate(&d, &cert).is_empty());
    }

    #[test]
    fn empty_graph() {
        let d = double_graph(&GameInstance::empty());
        let cert = solve_bipartite(&d);
        assert!(cert.matched.is_empty() && cert.left_duals.is_empty());
        assert!(check_certificate(&d, &cert).is_empty());

        let isolated = GameInstance::new(3, vec![]).unwrap();
        let d = double_graph(&isolated);
        let cert = solve_bipartite(&d);
        assert_eq!(cert.left_duals, vec![0, 0, 0]);
        assert_eq!(cert.right_duals, vec![0, 0, 0]);
    }

    #[test]
    fn detects_broken_certificates() {
        let d = double_graph(&single_edge());
        let good = solve_bipartite(&d);

        let mut low = good.clone();
        let x = if low.left_duals[0] > 0 {
            &mut low.left_duals[0]
        } else {
            &mut low.right_duals[1]
        };
        *x -= 1;
        let v = check_certificate(&d, &low);
        assert!(v.iter().any(|v| matches!(
            v,
            CertificateViolation::DualInfeasible { .. }
                | CertificateViolation::MatchedNotTight { .. }
        )));

        let mut unmatched = good.clone();
        unmatched.matched.retain(|&e| e != 0);
        let v = check_certificate(&d, &unmatched);
        assert!(v
            .iter()
            .any(|v| matches!(v, CertificateViolation::UnmatchedPositiveDual { .. })));

        let mut doubled = good;
        doubled.matched.push(0);
        let v = check_certificate(&d, &doubled);
        assert!(v
            .iter()
            .any(|v| matches!(v, CertificateViolation::NotAMatching { .. })));
    }

    #[test]
    fn zero_weight_edges() {
        let g = GameInstance::new(3, vec![Edge::new(0, 1, 0), Edge::new(1, 2, 0)]).unwrap();
        let d = double_graph(&g);
        let cert = solve_bipartite(&d);
        assert_eq!(cert.dual_total(), 0);
        assert!(check_certificate(&d, &cert).is_empty());
    }

    #[test]
    fn random_instances_match_brute_force() {
        for seed in 0..300 {
            let n = (seed % 8) as usize + 1;
            let p = EdgeProbability::new(seed % 4 + 1, 4).unwrap();
            let g = gen_random(n, p, 1 + seed % 9, seed, seed % 5 == 0).unwrap();
            let d = double_graph(&g);
            let cert = solve_bipartite(&d);
            assert_eq!(check_certificate(&d, &cert), vec![], "seed {seed}");
            assert_eq!(cert.matched_weight(&d), brute_max(&d), "seed {seed}");
        }
    }
}
