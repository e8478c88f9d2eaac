//! Matching game instances: a weighted undirected simple graph whose vertices
//! are agents and whose edge weights are the profits of pairwise trades.

mod format;
mod generate;

use std::collections::HashSet;

use thiserror::Error;

pub use format::{parse_imputation, parse_instance, serialize_imputation, serialize_instance};
pub use generate::{gen_gap_family, gen_odd_cycle, gen_random, EdgeProbability};

use crate::money::{Money, ParseMoneyError};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u64,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, weight: u64) -> Self {
        Edge { u, v, weight }
    }

    /// Endpoints with the smaller id first.
    pub fn key(&self) -> (VertexId, VertexId) {
        if self.u < self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: String },
    #[error("line {line}: vertex {vertex} out of range 1..={vertex_count}")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("imputation: {0}")]
    Imputation(String),
    #[error(transparent)]
    Money(#[from] ParseMoneyError),
}

/// A validated matching game. Vertex ids are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameInstance {
    vertex_count: usize,
    edges: Vec<Edge>,
    name: Option<String>,
}

impl GameInstance {
    /// Validates and builds an instance. Errors carry the 1-based position of
    /// the offending edge as their line number.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, InstanceError> {
        let mut seen = HashSet::with_capacity(edges.len());
        for (idx, e) in edges.iter().enumerate() {
            let line = idx + 1;
            for x in [e.u, e.v] {
                if x >= vertex_count {
                    return Err(InstanceError::VertexOutOfRange {
                        line,
                        vertex: x + 1,
                        vertex_count,
                    });
                }
            }
            if e.u == e.v {
                return Err(InstanceError::SelfLoop {
                    line,
                    vertex: e.u + 1,
                });
            }
            if !seen.insert(e.key()) {
                return Err(InstanceError::DuplicateEdge {
                    line,
                    u: e.u + 1,
                    v: e.v + 1,
                });
            }
        }
        Ok(GameInstance {
            vertex_count,
            edges,
            name: None,
        })
    }

    pub fn empty() -> Self {
        GameInstance {
            vertex_count: 0,
            edges: Vec::new(),
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn weight_money(&self, idx: usize) -> Money {
        Money::from(self.edges[idx].weight)
    }

    /// Incident edge indices per vertex, each list sorted by neighbour id.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (idx, e) in self.edges.iter().enumerate() {
            inc[e.u].push(idx);
            inc[e.v].push(idx);
        }
        for (x, list) in inc.iter_mut().enumerate() {
            list.sort_by_key(|&i| self.edges[i].other(x));
        }
        inc
    }

    /// Neighbour lists sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        self.incidence()
            .into_iter()
            .enumerate()
            .map(|(x, list)| list.into_iter().map(|i| self.edges[i].other(x)).collect())
            .collect()
    }

    /// Index of the edge joining `a` and `b`, if any.
    pub fn find_edge(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.iter().position(|e| e.key() == key)
    }

    pub fn total_weight(&self) -> u128 {
        self.edges.iter().map(|e| e.weight as u128).sum()
    }
}

/// A set of agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition {
    members: Vec<VertexId>,
}

impl Coalition {
    pub fn new(mut members: Vec<VertexId>) -> Self {
        members.sort_unstable();
        members.dedup();
        Coalition { members }
    }

    pub fn grand(g: &GameInstance) -> Self {
        Coalition {
            members: (0..g.vertex_count()).collect(),
        }
    }

    pub fn from_mask(mask: u64) -> Self {
        Coalition {
            members: (0..64).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Whether every member is a vertex of `g`.
    pub fn is_within(&self, g: &GameInstance) -> bool {
        self.members.iter().all(|&x| x < g.vertex_count())
    }

    /// 1-based member ids, as they appear in files and reports.
    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|x| x + 1).collect()
    }
}
