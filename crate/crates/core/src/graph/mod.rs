//! Simple undirected graphs on vertices `0..n`.

mod connectivity;
mod generators;
mod minor;
mod petersen;

pub use connectivity::vertex_connectivity;
pub use generators::{generate_named, icosahedron, petersen_graph, random_4connected_planar_triangulation};
pub use minor::{has_minor, MinorModel, MinorSearch, DEFAULT_MINOR_BUDGET};
pub use petersen::{canonical_form, is_flat, is_flat_with_budget, petersen_family, CanonicalForm, FlatnessReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple graph. Edges are stored sorted with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.n, r.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

impl Graph {
    /// Validates and builds a graph. Rejects loops, repeated edges (in either
    /// orientation) and endpoints `>= n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if adj[i].contains(&j) {
                return Err(Error::DuplicateEdge(i, j));
            }
            adj[i].push(j);
            adj[j].push(i);
            list.push((i, j));
        }
        list.sort_unstable();
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph { n, edges: list, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && i < self.n && j < self.n && self.adj[i].binary_search(&j).is_ok()
    }

    /// Distinct non-adjacent pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if !seen[s] {
                count += 1;
                self.mark_component(s, &mut seen, |_| true);
            }
        }
        count
    }

    /// Whether `vertices` is nonempty and induces a connected subgraph.
    pub fn induces_connected(&self, vertices: &[usize]) -> bool {
        if vertices.is_empty() {
            return false;
        }
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        self.mark_component(vertices[0], &mut seen, |v| inside[v]);
        vertices.iter().all(|&v| seen[v])
    }

    fn mark_component(&self, start: usize, seen: &mut [bool], allowed: impl Fn(usize) -> bool) {
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        Graph::new(self.n, self.edges.iter().map(|&(i, j)| (perm[i], perm[j])))
            .expect("permutation of a valid graph is valid")
    }

    /// Every component is a path (the graph is a forest with maximum degree 2).
    pub fn is_path_union(&self) -> bool {
        self.adj.iter().all(|nb| nb.len() <= 2) && self.edges.len() + self.component_count() == self.n
    }

    /// Cyclic vertex order if the graph is a single circuit.
    pub fn cycle_order(&self) -> Option<Vec<usize>> {
        if self.n < 3 || !self.is_connected() || self.adj.iter().any(|nb| nb.len() != 2) {
            return None;
        }
        let mut order = vec![0];
        let mut prev = 0;
        let mut cur = self.adj[0][0];
        while cur != 0 {
            order.push(cur);
            let next = if self.adj[cur][0] == prev { self.adj[cur][1] } else { self.adj[cur][0] };
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Contract edge `(a, b)`: `b` is merged into `a` and removed, higher
    /// vertices shift down by one. Parallel edges collapse.
    pub fn contract(&self, a: usize, b: usize) -> Graph {
        let relabel = |v: usize| -> usize {
            let v = if v == b { a } else { v };
            if v > b {
                v - 1
            } else {
                v
            }
        };
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(i, j)| (relabel(i), relabel(j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| if i < j { (i, j) } else { (j, i) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Graph::new(self.n - 1, edges).expect("contraction of a valid graph is valid")
    }

    pub fn delete_vertex(&self, v: usize) -> Graph {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        Graph::new(
            self.n - 1,
            self.edges
                .iter()
                .filter(|&&(i, j)| i != v && j != v)
                .map(|&(i, j)| (shift(i), shift(j))),
        )
        .expect("vertex deletion of a valid graph is valid")
    }

    pub fn delete_edge(&self, i: usize, j: usize) -> Graph {
        let key = if i < j { (i, j) } else { (j, i) };
        Graph::new(self.n, self.edges.iter().copied().filter(|&e| e != key))
            .expect("edge deletion of a valid graph is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_k2() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(3, [(0, 0)]), Err(Error::LoopEdge(0)));
        assert_eq!(Graph::new(3, [(0, 1), (1, 0)]), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(
            Graph::new(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn k4_from_all_pairs() {
        let pairs = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j)));
        let g = Graph::new(4, pairs).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.non_edges().is_empty());
    }

    #[test]
    fn json_shape_is_sorted() {
        let g = Graph::new(3, [(2, 1), (1, 0)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn contraction_merges_parallel_edges() {
        // triangle -> single edge
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = g.contract(0, 1);
        assert_eq!(c.n(), 2);
        assert_eq!(c.edges(), &[(0, 1)]);
    }

    #[test]
    fn cycle_order_and_path_union() {
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(c5.cycle_order().unwrap().len(), 5);
        assert!(!c5.is_path_union());
        let p = Graph::new(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert!(p.is_path_union());
        assert!(p.cycle_order().is_none());
        assert_eq!(p.component_count(), 2);
    }

    #[test]
    fn induced_connectivity() {
        let p = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(p.induces_connected(&[1, 2]));
        assert!(!p.induces_connected(&[0, 2]));
        assert!(!p.induces_connected(&[]));
    }
}
