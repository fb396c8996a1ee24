use std::collections::VecDeque;

use super::Graph;
use crate::error::{Error, Result};

/// Size of a minimum vertex cut; `n - 1` for complete graphs.
///
/// Each vertex `v` is split into `v_in -> v_out` with capacity 1; edges become
/// pairs of arcs `u_out -> v_in`, `v_out -> u_in` of unbounded capacity. The
/// answer is the minimum s-t flow over non-adjacent pairs (Menger).
pub fn vertex_connectivity(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooSmall(format!("vertex connectivity needs >= 2 vertices, got {n}")));
    }
    let mut best = n - 1;
    for s in 0..n {
        for t in s + 1..n {
            if g.has_edge(s, t) {
                continue;
            }
            let f = max_disjoint_paths(g, s, t, best);
            best = best.min(f);
            if best == 0 {
                return Ok(0);
            }
        }
    }
    Ok(best)
}

/// Number of internally vertex-disjoint s-t paths, capped at `limit`.
fn max_disjoint_paths(g: &Graph, s: usize, t: usize, limit: usize) -> usize {
    let n = g.n();
    let nodes = 2 * n;
    let inf = n as i32 + 1;
    // residual capacities on a dense 2n x 2n grid; n is small
    let mut cap = vec![0i32; nodes * nodes];
    let idx = |a: usize, b: usize| a * nodes + b;
    for v in 0..n {
        let c = if v == s || v == t { inf } else { 1 };
        cap[idx(2 * v, 2 * v + 1)] = c;
    }
    for &(a, b) in g.edges() {
        cap[idx(2 * a + 1, 2 * b)] = inf;
        cap[idx(2 * b + 1, 2 * a)] = inf;
    }
    let source = 2 * s + 1;
    let sink = 2 * t;
    let mut flow = 0;
    let mut parent = vec![usize::MAX; nodes];
    while flow < limit {
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        parent[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for y in 0..nodes {
                if parent[y] == usize::MAX && cap[idx(x, y)] > 0 {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut y = sink;
        while y != source {
            let x = parent[y];
            cap[idx(x, y)] -= 1;
            cap[idx(y, x)] += 1;
            y = x;
        }
        flow += 1;
    }
    flow
}
