use std::collections::VecDeque;

use crate::instance::GameInstance;
use crate::money::Money;

/// Length of a shortest odd cycle, or `None` for bipartite graphs.
///
/// Breadth-first layering from every start vertex: an edge joining two
/// vertices of the same layer `d` closes an odd walk of length `2d + 1`, and
/// from a vertex on a shortest odd cycle that walk is the cycle itself.
pub fn odd_girth(g: &GameInstance) -> Option<usize> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[x] + 1 >= b) {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                } else if dist[y] == dist[x] {
                    let len = 2 * dist[x] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// `2k / (2k + 1)` when the shortest odd cycle has length `2k + 1`, else 1.
pub fn guaranteed_alpha(g: &GameInstance) -> Money {
    match odd_girth(g) {
        Some(len) => Money::ratio(len as u64 - 1, len as u64),
        None => Money::one(),
    }
}
