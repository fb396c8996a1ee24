//! The Petersen family (the ΔY/YΔ closure of K_6) and the flatness test
//! built on it.

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use super::minor::{MinorModel, MinorSearch, DEFAULT_MINOR_BUDGET};
use super::{generate_named, Graph};
use crate::error::Result;

/// Isomorphism-invariant form: the lexicographically largest sequence of
/// adjacency rows over all vertex orders that list vertices by non-increasing
/// degree. Row `k` has bit `j` set iff the `k`-th and `j`-th vertices (j < k)
/// are adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    degrees: Vec<usize>,
    rows: Vec<u32>,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    assert!(n <= 32, "canonical form is limited to 32 vertices");
    let degrees = g.degree_sequence();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let mut search = CanonSearch {
        n,
        degrees: &degrees,
        deg_of: (0..n).map(|v| g.degree(v)).collect(),
        adj,
        order: Vec::with_capacity(n),
        rows: Vec::with_capacity(n),
        best: None,
    };
    search.descend();
    CanonicalForm {
        degrees: degrees.clone(),
        rows: search.best.unwrap_or_default(),
    }
}

struct CanonSearch<'a> {
    n: usize,
    degrees: &'a [usize],
    deg_of: Vec<usize>,
    adj: Vec<u32>,
    order: Vec<usize>,
    rows: Vec<u32>,
    best: Option<Vec<u32>>,
}

impl CanonSearch<'_> {
    fn descend(&mut self) {
        let k = self.order.len();
        if k == self.n {
            if self.best.as_ref().is_none_or(|b| self.rows > *b) {
                self.best = Some(self.rows.clone());
            }
            return;
        }
        for v in 0..self.n {
            if self.deg_of[v] != self.degrees[k] || self.order.contains(&v) {
                continue;
            }
            let row = self
                .order
                .iter()
                .enumerate()
                .fold(0u32, |m, (j, &w)| if self.adj[v] & (1 << w) != 0 { m | (1 << j) } else { m });
            self.rows.push(row);
            // a prefix below the best prefix cannot complete to a larger sequence
            let behind = self.best.as_ref().is_some_and(|b| self.rows[..] < b[..=k]);
            if !behind {
                self.order.push(v);
                self.descend();
                self.order.pop();
            }
            self.rows.pop();
        }
    }
}

fn delta_to_wye(g: &Graph, tri: [usize; 3]) -> Graph {
    let [a, b, c] = tri;
    let removed = [(a, b), (b, c), (a, c)].map(|(x, y)| if x < y { (x, y) } else { (y, x) });
    let n = g.n();
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|e| !removed.contains(e))
        .chain([(a, n), (b, n), (c, n)]);
    Graph::new(n + 1, edges).expect("ΔY yields a simple graph")
}

/// YΔ at a degree-3 vertex; `None` when the triangle would duplicate an edge.
fn wye_to_delta(g: &Graph, v: usize) -> Option<Graph> {
    let nb = g.neighbors(v);
    if nb.len() != 3 {
        return None;
    }
    let (a, b, c) = (nb[0], nb[1], nb[2]);
    if g.has_edge(a, b) || g.has_edge(b, c) || g.has_edge(a, c) {
        return None;
    }
    let extended = Graph::new(g.n(), g.edges().iter().copied().chain([(a, b), (b, c), (a, c)]))
        .expect("new triangle edges are fresh");
    Some(extended.delete_vertex(v))
}

fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        for &c in g.neighbors(b) {
            if c > b && g.has_edge(a, c) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn compute_family() -> Vec<Graph> {
    let k6 = generate_named("complete", &[6]).expect("K_6");
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut family = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_form(&k6));
    queue.push_back(k6);
    while let Some(g) = queue.pop_front() {
        let mut next: Vec<Graph> = triangles(&g).into_iter().map(|t| delta_to_wye(&g, t)).collect();
        next.extend((0..g.n()).filter_map(|v| wye_to_delta(&g, v)));
        family.push(g);
        for h in next {
            if seen.insert(canonical_form(&h)) {
                queue.push_back(h);
            }
        }
    }
    family
}

/// The seven Petersen-family graphs, K_6 first, in discovery order.
pub fn petersen_family() -> Vec<Graph> {
    static FAMILY: OnceLock<Vec<Graph>> = OnceLock::new();
    FAMILY.get_or_init(compute_family).clone()
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub flat: bool,
    /// Index into `petersen_family()` and a model of the first obstruction found.
    pub obstruction: Option<(usize, MinorModel)>,
    /// Search nodes spent on each family member that was checked.
    pub nodes: Vec<u64>,
}

/// Flatness via forbidden minors, with a per-decision node budget.
pub fn is_flat_with_budget(g: &Graph, budget: u64) -> Result<FlatnessReport> {
    let mut nodes = Vec::new();
    for (i, member) in petersen_family().iter().enumerate() {
        let mut search = MinorSearch::new(budget);
        let found = search.find(g, member)?;
        nodes.push(search.nodes());
        if let Some(model) = found {
            return Ok(FlatnessReport {
                flat: false,
                obstruction: Some((i, model)),
                nodes,
            });
        }
    }
    Ok(FlatnessReport {
        flat: true,
        obstruction: None,
        nodes,
    })
}

pub fn is_flat(g: &Graph) -> Result<bool> {
    Ok(is_flat_with_budget(g, DEFAULT_MINOR_BUDGET)?.flat)
}
