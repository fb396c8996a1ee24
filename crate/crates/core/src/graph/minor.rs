//! Exhaustive minor containment for small hosts.
//!
//! A pattern `P` is a minor of `H` iff `P` is a (not necessarily induced)
//! subgraph of some contraction `H / F`, where the parts of the contraction
//! are connected vertex sets. The search walks the contraction lattice of `H`
//! depth-first, one edge contraction at a time, memoizing visited partitions,
//! and runs a subgraph-embedding check at every partition. Contraction never
//! increases the vertex count, the edge count, or the number of vertices of
//! degree `>= t` for `t <= 3`, so all three prune whole subtrees.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

pub const DEFAULT_MINOR_BUDGET: u64 = 10_000_000;
const MAX_HOST: usize = 32;

/// Branch sets of a minor model: `branch_sets[p]` is the host vertex set that
/// contracts onto pattern vertex `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub branch_sets: Vec<Vec<usize>>,
}

impl MinorModel {
    /// Checks disjointness, connectivity of every branch set and edge coverage.
    pub fn validate(&self, host: &Graph, pattern: &Graph) -> std::result::Result<(), String> {
        if self.branch_sets.len() != pattern.n() {
            return Err(format!(
                "{} branch sets for a pattern on {} vertices",
                self.branch_sets.len(),
                pattern.n()
            ));
        }
        let mut owner = vec![usize::MAX; host.n()];
        for (p, set) in self.branch_sets.iter().enumerate() {
            for &v in set {
                if v >= host.n() {
                    return Err(format!("host vertex {v} out of range"));
                }
                if owner[v] != usize::MAX {
                    return Err(format!("host vertex {v} in branch sets {} and {p}", owner[v]));
                }
                owner[v] = p;
            }
            if !host.induces_connected(set) {
                return Err(format!("branch set {p} is empty or disconnected"));
            }
        }
        for &(a, b) in pattern.edges() {
            let covered = host
                .edges()
                .iter()
                .any(|&(x, y)| (owner[x] == a && owner[y] == b) || (owner[x] == b && owner[y] == a));
            if !covered {
                return Err(format!("pattern edge ({a}, {b}) has no host edge"));
            }
        }
        Ok(())
    }
}

/// A budgeted minor search. The budget counts contraction states plus
/// subgraph-embedding backtracking nodes.
#[derive(Debug, Clone)]
pub struct MinorSearch {
    budget: u64,
    nodes: u64,
}

impl Default for MinorSearch {
    fn default() -> Self {
        Self::new(DEFAULT_MINOR_BUDGET)
    }
}

pub fn has_minor(host: &Graph, pattern: &Graph) -> Result<Option<MinorModel>> {
    MinorSearch::default().find(host, pattern)
}

struct Quotient {
    k: usize,
    adj: Vec<u32>,
    edges: usize,
}

impl MinorSearch {
    pub fn new(budget: u64) -> Self {
        MinorSearch { budget, nodes: 0 }
    }

    /// Nodes spent by the most recent `find`.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn find(&mut self, host: &Graph, pattern: &Graph) -> Result<Option<MinorModel>> {
        self.nodes = 0;
        if host.n() > MAX_HOST {
            return Err(Error::GraphTooLarge(host.n()));
        }
        if pattern.n() > host.n() || pattern.edge_count() > host.edge_count() {
            return Ok(None);
        }
        let pat = PatternOrder::new(pattern);
        let threshold = (0..pattern.n()).map(|v| pattern.degree(v)).min().unwrap_or(0).min(3);

        let start: Vec<u8> = (0..host.n() as u8).collect();
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        seen.insert(start.clone());
        let mut stack = vec![start];
        while let Some(labels) = stack.pop() {
            self.tick()?;
            let q = quotient(host, &labels);
            if q.k < pattern.n() || q.edges < pattern.edge_count() {
                continue;
            }
            let heavy = q.adj.iter().filter(|a| a.count_ones() as usize >= threshold).count();
            if heavy < pattern.n() {
                continue;
            }
            if let Some(map) = self.embed(&pat, &q)? {
                let branch_sets = (0..pattern.n())
                    .map(|p| (0..host.n()).filter(|&v| labels[v] as usize == map[p]).collect())
                    .collect();
                return Ok(Some(MinorModel { branch_sets }));
            }
            for a in 0..q.k {
                let mut higher = q.adj[a] & u32::MAX.checked_shl(a as u32 + 1).unwrap_or(0);
                while higher != 0 {
                    let b = higher.trailing_zeros() as u8;
                    higher &= higher - 1;
                    let merged = normalize(labels.iter().map(|&l| if l == b { a as u8 } else { l }));
                    if seen.insert(merged.clone()) {
                        stack.push(merged);
                    }
                }
            }
        }
        Ok(None)
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::SearchBudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    /// Injective map pattern -> quotient vertices preserving pattern edges.
    fn embed(&mut self, pat: &PatternOrder, q: &Quotient) -> Result<Option<Vec<usize>>> {
        let np = pat.order.len();
        let mut map = vec![usize::MAX; np];
        if np == 0 {
            return Ok(Some(map));
        }
        let full = if q.k == 32 { u32::MAX } else { (1u32 << q.k) - 1 };
        let deg_ok: Vec<u32> = pat
            .order
            .iter()
            .map(|&p| {
                (0..q.k)
                    .filter(|&x| q.adj[x].count_ones() as usize >= pat.degree[p])
                    .fold(0u32, |m, x| m | (1 << x))
            })
            .collect();
        // candidates[depth] holds the untried candidate mask at that depth
        let mut candidates = vec![0u32; np];
        let mut used = 0u32;
        let mut depth = 0;
        candidates[0] = deg_ok[0];
        loop {
            if candidates[depth] == 0 {
                if depth == 0 {
                    return Ok(None);
                }
                depth -= 1;
                used &= !(1 << map[pat.order[depth]]);
                continue;
            }
            self.tick()?;
            let x = candidates[depth].trailing_zeros() as usize;
            candidates[depth] &= candidates[depth] - 1;
            map[pat.order[depth]] = x;
            used |= 1 << x;
            depth += 1;
            if depth == np {
                return Ok(Some(map));
            }
            let mut mask = deg_ok[depth] & !used & full;
            for &prev in &pat.back_neighbors[depth] {
                mask &= q.adj[map[prev]];
            }
            candidates[depth] = mask;
        }
    }
}

/// Pattern vertices in search order, with each vertex's already-placed neighbours.
struct PatternOrder {
    order: Vec<usize>,
    degree: Vec<usize>,
    back_neighbors: Vec<Vec<usize>>,
}

impl PatternOrder {
    fn new(p: &Graph) -> Self {
        let n = p.n();
        let degree: Vec<usize> = (0..n).map(|v| p.degree(v)).collect();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let linked = p.neighbors(v).iter().filter(|&&w| placed[w]).count();
                    (linked, degree[v], std::cmp::Reverse(v))
                })
                .expect("unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let position: Vec<usize> = {
            let mut pos = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            pos
        };
        let back_neighbors = order
            .iter()
            .enumerate()
            .map(|(i, &v)| p.neighbors(v).iter().copied().filter(|&w| position[w] < i).collect())
            .collect();
        PatternOrder {
            order,
            degree,
            back_neighbors,
        }
    }
}

fn normalize(labels: impl Iterator<Item = u8>) -> Vec<u8> {
    let mut remap = [u8::MAX; MAX_HOST];
    let mut next = 0u8;
    labels
        .map(|l| {
            let slot = &mut remap[l as usize];
            if *slot == u8::MAX {
                *slot = next;
                next += 1;
            }
            *slot
        })
        .collect()
}

fn quotient(host: &Graph, labels: &[u8]) -> Quotient {
    let k = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut adj = vec![0u32; k];
    for &(i, j) in host.edges() {
        let (a, b) = (labels[i] as usize, labels[j] as usize);
        if a != b {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    let edges = adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2;
    Quotient { k, adj, edges }
}
