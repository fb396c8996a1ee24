//! Named graph families.
//!
//! Labelling conventions:
//! - `path(n)`: vertices `0..n` in order.
//! - `cycle(n)`: vertices `0..n` in cyclic order.
//! - `complete_bipartite(a, b)`: parts `0..a` and `a..a+b`.
//! - `complete_tripartite(a, b, c)`: parts in consecutive blocks.
//! - `icosahedron`: apex 0, upper ring 1..=5, lower ring 6..=10, apex 11.
//! - `petersen`: outer 5-cycle 0..5, spokes `i -- i+5`, inner pentagram.
//! - `random_4connected_planar_triangulation(n, seed)`: see below.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{vertex_connectivity, Graph};
use crate::error::{Error, Result};

pub fn generate_named(name: &str, params: &[i64]) -> Result<Graph> {
    let bad = |reason: &str| Error::BadParams {
        family: name.to_string(),
        reason: reason.to_string(),
    };
    let counts = |want: usize, min: i64| -> Result<Vec<usize>> {
        if params.len() != want {
            return Err(bad(&format!("expected {want} parameter(s), got {}", params.len())));
        }
        if params.iter().any(|&p| p < min) {
            return Err(bad(&format!("parameters must be >= {min}")));
        }
        Ok(params.iter().map(|&p| p as usize).collect())
    };
    match name {
        "path" => {
            let n = counts(1, 1)?[0];
            Graph::new(n, (1..n).map(|i| (i - 1, i)))
        }
        "cycle" => {
            let n = counts(1, 3)?[0];
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        "complete" => {
            let n = counts(1, 1)?[0];
            Ok(complete_multipartite(&vec![1; n]))
        }
        "complete_bipartite" => Ok(complete_multipartite(&counts(2, 1)?)),
        "complete_tripartite" => Ok(complete_multipartite(&counts(3, 1)?)),
        "complete_multipartite" => {
            if params.is_empty() {
                return Err(bad("need at least one part"));
            }
            Ok(complete_multipartite(&counts(params.len(), 1)?))
        }
        "octahedron" => {
            counts(0, 0)?;
            Ok(complete_multipartite(&[2, 2, 2]))
        }
        "icosahedron" => {
            counts(0, 0)?;
            Ok(icosahedron())
        }
        "petersen" => {
            counts(0, 0)?;
            Ok(petersen_graph())
        }
        "random_4connected_planar_triangulation" => {
            if params.len() != 2 || params[0] < 6 || params[1] < 0 {
                return Err(bad("expected (n >= 6, seed >= 0)"));
            }
            random_4connected_planar_triangulation(params[0] as usize, params[1] as u64)
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

fn complete_multipartite(parts: &[usize]) -> Graph {
    let mut part_of = Vec::new();
    for (p, &size) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, size));
    }
    let n = part_of.len();
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let edges: Vec<_> = edges.filter(|&(i, j)| part_of[i] != part_of[j]).collect();
    Graph::new(n, edges).expect("multipartite construction is valid")
}

pub fn icosahedron() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        let up = 1 + i;
        let up_next = 1 + (i + 1) % 5;
        let low = 6 + i;
        let low_next = 6 + (i + 1) % 5;
        edges.push((0, up));
        edges.push((up, up_next));
        edges.push((up, low));
        edges.push((up, low_next));
        edges.push((low, low_next));
        edges.push((low, 11));
    }
    Graph::new(12, edges).expect("icosahedron is valid")
}

pub fn petersen_graph() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, edges).expect("Petersen graph is valid")
}

/// Oriented triangular faces of a sphere triangulation.
struct Triangulation {
    faces: Vec<[usize; 3]>,
    degree: Vec<usize>,
    adj: Vec<Vec<bool>>,
}

impl Triangulation {
    fn new(n: usize) -> Self {
        let mut t = Triangulation {
            faces: vec![[0, 1, 2], [0, 2, 1]],
            degree: vec![0; n],
            adj: vec![vec![false; n]; n],
        };
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            t.link(a, b);
        }
        t
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a][b] = true;
        self.adj[b][a] = true;
        self.degree[a] += 1;
        self.degree[b] += 1;
    }

    fn unlink(&mut self, a: usize, b: usize) {
        self.adj[a][b] = false;
        self.adj[b][a] = false;
        self.degree[a] -= 1;
        self.degree[b] -= 1;
    }

    fn insert(&mut self, face: usize, v: usize) {
        let [a, b, c] = self.faces[face];
        self.faces[face] = [a, b, v];
        self.faces.push([b, c, v]);
        self.faces.push([c, a, v]);
        for w in [a, b, c] {
            self.link(w, v);
        }
    }

    /// Flip the edge `a -> b` of face `f`, if the result stays a simple
    /// triangulation and neither endpoint drops below degree 3.
    fn try_flip(&mut self, f: usize, side: usize) -> bool {
        let a = self.faces[f][side];
        let b = self.faces[f][(side + 1) % 3];
        let c = self.faces[f][(side + 2) % 3];
        let Some((g, d)) = self.faces.iter().enumerate().find_map(|(gi, face)| {
            (0..3).find_map(|k| {
                (face[k] == b && face[(k + 1) % 3] == a).then(|| (gi, face[(k + 2) % 3]))
            })
        }) else {
            return false;
        };
        if c == d || self.adj[c][d] || self.degree[a] <= 3 || self.degree[b] <= 3 {
            return false;
        }
        // quad a, d, b, c (ccw) re-split along c-d
        self.faces[f] = [a, d, c];
        self.faces[g] = [d, b, c];
        self.unlink(a, b);
        self.link(c, d);
        true
    }

    fn graph(&self) -> Graph {
        let n = self.degree.len();
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::new(n, edges.filter(|&(i, j)| self.adj[i][j]).collect::<Vec<_>>())
            .expect("triangulation graph is valid")
    }
}

/// A random 4-connected planar triangulation on `n >= 6` vertices.
///
/// Vertices are inserted into uniformly random faces, starting from a
/// triangle. Face insertion alone always leaves a degree-3 vertex, so rounds
/// of random edge flips follow until the graph has minimum degree 4 and
/// vertex connectivity 4. Deterministic in `seed`.
pub fn random_4connected_planar_triangulation(n: usize, seed: u64) -> Result<Graph> {
    if n < 6 {
        return Err(Error::BadParams {
            family: "random_4connected_planar_triangulation".into(),
            reason: "no 4-connected triangulation has fewer than 6 vertices".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const MAX_ROUNDS: usize = 100_000;
    let mut tri = Triangulation::new(n);
    for v in 3..n {
        let f = rng.gen_range(0..tri.faces.len());
        tri.insert(f, v);
    }
    for _ in 0..MAX_ROUNDS {
        for _ in 0..n {
            let f = rng.gen_range(0..tri.faces.len());
            let side = rng.gen_range(0..3);
            tri.try_flip(f, side);
        }
        if tri.degree.iter().all(|&d| d >= 4) {
            let g = tri.graph();
            if vertex_connectivity(&g)? >= 4 {
                return Ok(g);
            }
        }
    }
    Err(Error::SearchBudgetExceeded(MAX_ROUNDS as u64))
}
