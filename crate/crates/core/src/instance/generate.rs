//! Instance generators: the integrality gap family, odd cycles and seeded
//! random graphs (general or bipartite).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, GameInstance, InstanceError};

/// A probability `numer / denom` in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeProbability {
    numer: u64,
    denom: u64,
}

impl EdgeProbability {
    pub fn new(numer: u64, denom: u64) -> Result<Self, InstanceError> {
        if denom == 0 || numer > denom {
            return Err(InstanceError::InvalidParameter(format!(
                "edge probability {numer}/{denom} is not in [0, 1]"
            )));
        }
        Ok(EdgeProbability { numer, denom })
    }

    pub fn one() -> Self {
        EdgeProbability { numer: 1, denom: 1 }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> bool {
        rng.gen_range(0..self.denom) < self.numer
    }
}

impl fmt::Display for EdgeProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl FromStr for EdgeProbability {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InstanceError::InvalidParameter(format!("invalid probability `{s}`"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let numer = n.trim().parse().map_err(|_| bad())?;
        let denom = d.trim().parse().map_err(|_| bad())?;
        EdgeProbability::new(numer, denom)
    }
}

/// The gap family: 2n disjoint unit triangles on vertices `(i_l, j_l, k_l)`,
/// stored as ids `3l, 3l+1, 3l+2`. With `connected`, the `i_l` are joined by a
/// clique of weight-0 edges.
pub fn gen_gap_family(n: usize, connected: bool) -> Result<GameInstance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::InvalidParameter(
            "gap family index n must be at least 1".into(),
        ));
    }
    let triangles = 2 * n;
    let mut edges = Vec::with_capacity(3 * triangles);
    for l in 0..triangles {
        let (i, j, k) = (3 * l, 3 * l + 1, 3 * l + 2);
        edges.push(Edge::new(i, j, 1));
        edges.push(Edge::new(j, k, 1));
        edges.push(Edge::new(i, k, 1));
    }
    if connected {
        for a in 0..triangles {
            for b in a + 1..triangles {
                edges.push(Edge::new(3 * a, 3 * b, 0));
            }
        }
    }
    let name = if connected {
        format!("gap-{n}-connected")
    } else {
        format!("gap-{n}")
    };
    Ok(GameInstance::new(3 * triangles, edges)?.with_name(name))
}

/// The cycle on `2k + 1` vertices with every edge of weight `weight`.
pub fn gen_odd_cycle(k: usize, weight: u64) -> Result<GameInstance, InstanceError> {
    if k == 0 {
        return Err(InstanceError::InvalidParameter(
            "odd cycle half-length k must be at least 1".into(),
        ));
    }
    let len = 2 * k + 1;
    let edges = (0..len)
        .map(|i| Edge::new(i, (i + 1) % len, weight))
        .collect();
    Ok(GameInstance::new(len, edges)?.with_name(format!("cycle-{len}")))
}

/// Seeded random instance. Candidate pairs are visited in lexicographic order;
/// each is kept with probability `p` and given a weight uniform in
/// `1..=max_weight`. With `bipartite`, only pairs between the first `n / 2`
/// vertices and the rest are candidates.
pub fn gen_random(
    n: usize,
    p: EdgeProbability,
    max_weight: u64,
    seed: u64,
    bipartite: bool,
) -> Result<GameInstance, InstanceError> {
    if max_weight == 0 {
        return Err(InstanceError::InvalidParameter(
            "max weight must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = n / 2;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if bipartite && !(u < half && v >= half) {
                continue;
            }
            if p.sample(&mut rng) {
                edges.push(Edge::new(u, v, rng.gen_range(1..=max_weight)));
            }
        }
    }
    let kind = if bipartite { "bip" } else { "rand" };
    Ok(GameInstance::new(n, edges)?.with_name(format!("{kind}-{n}-{p}-{max_weight}-{seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_family_counts() {
        let g1 = gen_gap_family(1, false).unwrap();
        assert_eq!((g1.vertex_count(), g1.edge_count()), (6, 6));
        let g2 = gen_gap_family(2, false).unwrap();
        assert_eq!((g2.vertex_count(), g2.edge_count()), (12, 12));
        let c1 = gen_gap_family(1, true).unwrap();
        assert_eq!((c1.vertex_count(), c1.edge_count()), (6, 7));
        let zero: Vec<_> = c1.edges().iter().filter(|e| e.weight == 0).collect();
        assert_eq!(zero, vec![&Edge::new(0, 3, 0)]);
        assert!(gen_gap_family(0, false).is_err());
        for n in 1..=8 {
            let g = gen_gap_family(n, false).unwrap();
            assert_eq!((g.vertex_count(), g.edge_count()), (6 * n, 6 * n));
            let c = gen_gap_family(n, true).unwrap();
            assert_eq!(c.edge_count(), 6 * n + 2 * n * (2 * n - 1) / 2);
        }
    }

    #[test]
    fn odd_cycles() {
        let k3 = gen_odd_cycle(1, 1).unwrap();
        assert_eq!((k3.vertex_count(), k3.edge_count()), (3, 3));
        let c5 = gen_odd_cycle(2, 3).unwrap();
        assert_eq!((c5.vertex_count(), c5.edge_count()), (5, 5));
        assert!(c5.edges().iter().all(|e| e.weight == 3));
        assert!(c5.adjacency().iter().all(|nb| nb.len() == 2));
        assert!(gen_odd_cycle(0, 1).is_err());
    }

    #[test]
    fn random_instances() {
        let empty = gen_random(0, EdgeProbability::one(), 1, 1, false).unwrap();
        assert_eq!((empty.vertex_count(), empty.edge_count()), (0, 0));

        let k33 = gen_random(6, EdgeProbability::one(), 1, 9, true).unwrap();
        assert_eq!(k33.edge_count(), 9);
        assert!(k33
            .edges()
            .iter()
            .all(|e| e.u < 3 && e.v >= 3 && e.weight == 1));

        let p = "1/2".parse().unwrap();
        let a = gen_random(8, p, 10, 42, false).unwrap();
        let b = gen_random(8, p, 10, 42, false).unwrap();
        assert_eq!(
            super::super::serialize_instance(&a),
            super::super::serialize_instance(&b)
        );
        assert!(a.edges().iter().all(|e| (1..=10).contains(&e.weight)));

        let none = gen_random(7, "0".parse().unwrap(), 5, 3, false).unwrap();
        assert_eq!(none.edge_count(), 0);
    }

    #[test]
    fn probability_parsing() {
        assert_eq!(
            "1/2".parse::<EdgeProbability>().unwrap(),
            EdgeProbability::new(1, 2).unwrap()
        );
        assert_eq!(
            "1".parse::<EdgeProbability>().unwrap(),
            EdgeProbability::one()
        );
        assert!("3/2".parse::<EdgeProbability>().is_err());
        assert!("1/0".parse::<EdgeProbability>().is_err());
    }
}
