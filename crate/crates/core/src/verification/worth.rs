use super::VerifyError;
use crate::instance::{Coalition, GameInstance};
use crate::money::Money;

/// Caps for exponential enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    /// Most positive-weight edges allowed in one connected component of a
    /// coalition's induced subgraph.
    pub max_edges: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits { max_edges: 24 }
    }
}

/// Largest vertex count [`worth_table`] accepts.
pub const WORTH_TABLE_MAX_VERTICES: usize = 26;

struct Search<'a> {
    /// (local u, local v, weight), heaviest first.
    edges: &'a [(usize, usize, u128)],
    /// `suffix[i]` is the total weight of `edges[i..]`.
    suffix: Vec<u128>,
    used: Vec<bool>,
    best: u128,
}

impl Search<'_> {
    fn go(&mut self, idx: usize, acc: u128) {
        if acc > self.best {
            self.best = acc;
        }
        if idx == self.edges.len() || acc + self.suffix[idx] <= self.best {
            return;
        }
        let (a, b, w) = self.edges[idx];
        if !self.used[a] && !self.used[b] {
            self.used[a] = true;
            self.used[b] = true;
            self.go(idx + 1, acc + w);
            self.used[a] = false;
            self.used[b] = false;
        }
        self.go(idx + 1, acc);
    }
}

/// Worth `p(S)`: the weight of a maximum weight matching inside `s`, found by
/// include/exclude enumeration over edges with a remaining-weight bound.
///
/// Zero-weight edges never change the worth and are ignored; the rest is
/// split into connected components, each solved separately and each subject
/// to `limits.max_edges`.
pub fn worth_bruteforce(
    g: &GameInstance,
    s: &Coalition,
    limits: BruteForceLimits,
) -> Result<Money, VerifyError> {
    if !s.is_within(g) {
        return Err(VerifyError::CoalitionOutOfRange);
    }
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    for &x in s.members() {
        inside[x] = true;
    }
    let edges: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| e.weight > 0 && inside[e.u] && inside[e.v])
        .collect();

    // union-find over coalition vertices
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &edges {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<_>> = Default::default();
    for e in &edges {
        let root = find(&mut parent, e.u);
        groups.entry(root).or_default().push(*e);
    }

    let mut total: u128 = 0;
    let mut local = vec![usize::MAX; n];
    for comp in groups.values() {
        if comp.len() > limits.max_edges {
            return Err(VerifyError::BoundExceeded {
                what: "brute-force matching enumeration (edges per component)",
                size: comp.len(),
                limit: limits.max_edges,
            });
        }
        let mut count = 0;
        let mut relabel = |x: usize, local: &mut Vec<usize>| {
            if local[x] == usize::MAX {
                local[x] = count;
                count += 1;
            }
            local[x]
        };
        let mut list: Vec<(usize, usize, u128)> = comp
            .iter()
            .map(|e| {
                (
                    relabel(e.u, &mut local),
                    relabel(e.v, &mut local),
                    e.weight as u128,
                )
            })
            .collect();
        list.sort_by_key(|e| std::cmp::Reverse(e.2));
        let mut suffix = vec![0u128; list.len() + 1];
        for i in (0..list.len()).rev() {
            suffix[i] = suffix[i + 1] + list[i].2;
        }
        let mut search = Search {
            edges: &list,
            suffix,
            used: vec![false; count],
            best: 0,
        };
        search.go(0, 0);
        total += search.best;
    }
    Ok(Money::from_int(total))
}

/// `p(S)` for every subset `S`, indexed by bitmask, computed by the
/// recurrence on the lowest member: it is either unmatched or matched to one
/// of its neighbours inside `S`.
pub fn worth_table(g: &GameInstance, max_n: usize) -> Result<Vec<u128>, VerifyError> {
    let n = g.vertex_count();
    let limit = max_n.min(WORTH_TABLE_MAX_VERTICES);
    if n > limit {
        return Err(VerifyError::BoundExceeded {
            what: "exhaustive coalition enumeration (vertices)",
            size: n,
            limit,
        });
    }
    let mut nbrs: Vec<Vec<(usize, u128)>> = vec![Vec::new(); n];
    for e in g.edges() {
        nbrs[e.u].push((e.v, e.weight as u128));
        nbrs[e.v].push((e.u, e.weight as u128));
    }
    let mut table = vec![0u128; 1usize << n];
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut best = table[rest];
        for &(other, w) in &nbrs[low] {
            if rest >> other & 1 == 1 {
                best = best.max(w + table[rest & !(1 << other)]);
            }
        }
        table[mask] = best;
    }
    Ok(table)
}
