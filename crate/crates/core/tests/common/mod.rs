//! Test-only oracles, written independently of the library's solvers.
#![allow(dead_code)]

use mgame::{GameInstance, Money};

/// Maximum-weight matching of the doubled graph by dynamic programming over
/// left vertices and the set of right vertices already used. Returns the
/// optimum in half-units, which equals twice the fractional matching LP
/// optimum of `g`.
pub fn doubled_optimum_half_units(g: &GameInstance) -> u128 {
    let n = g.vertex_count();
    assert!(n <= 16, "oracle limited to 16 vertices");
    // weight[i][j] of doubled edge (i', j'') or None
    let mut weight = vec![vec![None; n]; n];
    for e in g.edges() {
        weight[e.u][e.v] = Some(e.weight as u128);
        weight[e.v][e.u] = Some(e.weight as u128);
    }
    let mut dp = vec![None::<u128>; 1 << n];
    dp[0] = Some(0);
    for row in weight.iter() {
        let mut next = dp.clone();
        for (mask, base) in dp.iter().enumerate() {
            let Some(base) = *base else { continue };
            for (j, w) in row.iter().enumerate() {
                if let Some(w) = w {
                    if mask >> j & 1 == 0 {
                        let m2 = mask | 1 << j;
                        let cand = base + w;
                        if next[m2].is_none_or(|x| x < cand) {
                            next[m2] = Some(cand);
                        }
                    }
                }
            }
        }
        dp = next;
    }
    dp.into_iter().flatten().max().unwrap_or(0)
}

pub fn fractional_optimum(g: &GameInstance) -> Money {
    Money::halves(doubled_optimum_half_units(g))
}

/// Maximum-weight matching of `g` restricted to `members`, by recursion on
/// the lowest unmatched member (unmatched, or matched to a later member).
pub fn max_matching_within(g: &GameInstance, members: &[usize]) -> u128 {
    let n = g.vertex_count();
    let mut w = vec![vec![None; n]; n];
    for e in g.edges() {
        w[e.u][e.v] = Some(e.weight as u128);
        w[e.v][e.u] = Some(e.weight as u128);
    }
    fn go(w: &[Vec<Option<u128>>], free: &mut Vec<usize>) -> u128 {
        let Some(first) = free.pop() else { return 0 };
        let mut best = go(w, free);
        for idx in 0..free.len() {
            let other = free[idx];
            if let Some(weight) = w[first][other] {
                free.remove(idx);
                best = best.max(weight + go(w, free));
                free.insert(idx, other);
            }
        }
        free.push(first);
        best
    }
    let mut free: Vec<usize> = members.to_vec();
    free.sort_unstable_by(|a, b| b.cmp(a));
    go(&w, &mut free)
}

pub fn max_matching(g: &GameInstance) -> u128 {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    max_matching_within(g, &all)
}

/// Connected components of the doubled graph, counted with union-find over
/// `2n` vertices (primed `i`, double-primed `n + i`).
pub fn doubled_component_count(g: &GameInstance) -> usize {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for e in g.edges() {
        union(e.u, n + e.v);
        union(e.v, n + e.u);
    }
    (0..2 * n).filter(|&x| find(&mut parent, x) == x).count()
}
