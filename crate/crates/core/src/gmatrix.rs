//! Well-signed G-matrices: validation, seeded generation, the diagonal shift
//! to exactly one negative eigenvalue, and the K_{2,t} witness.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{generate_named, Graph};
use crate::spectra::{eigen_sym, RatSymMatrix, SymMatrix};

/// A graph together with a matrix carrying its sign pattern: negative on
/// edges, zero on non-adjacent pairs, free diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WellSignedMatrix {
    pub graph: Graph,
    pub matrix: SymMatrix,
}

impl WellSignedMatrix {
    pub fn new(graph: Graph, matrix: SymMatrix) -> Result<Self> {
        let violations = validate_well_signed(&graph, &matrix)?;
        if let Some(v) = violations.first() {
            return Err(Error::Invalid(format!("not well-signed: {v}")));
        }
        Ok(WellSignedMatrix { graph, matrix })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn default_tol(&self) -> f64 {
        self.matrix.default_tol()
    }

    /// Same graph, diagonal shifted by `shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        WellSignedMatrix {
            graph: self.graph.clone(),
            matrix: self.matrix.shifted(shift),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "rule")]
pub enum Violation {
    PositiveOnEdge { i: usize, j: usize, value: f64 },
    ZeroOnEdge { i: usize, j: usize },
    NonzeroOnNonEdge { i: usize, j: usize, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PositiveOnEdge { i, j, value } => {
                write!(f, "positive off-diagonal {value} on edge ({i}, {j})")
            }
            Violation::ZeroOnEdge { i, j } => write!(f, "zero entry on edge ({i}, {j})"),
            Violation::NonzeroOnNonEdge { i, j, value } => {
                write!(f, "nonzero {value} on non-edge ({i}, {j})")
            }
        }
    }
}

/// Every sign-pattern violation, in lexicographic pair order. Empty iff the
/// matrix is a well-signed G-matrix.
pub fn validate_well_signed(g: &Graph, m: &SymMatrix) -> Result<Vec<Violation>> {
    if g.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: m.n(),
        });
    }
    let mut out = Vec::new();
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            let value = *m.get(i, j);
            if g.has_edge(i, j) {
                if value > 0.0 {
                    out.push(Violation::PositiveOnEdge { i, j, value });
                } else if value == 0.0 {
                    out.push(Violation::ZeroOnEdge { i, j });
                }
            } else if value != 0.0 {
                out.push(Violation::NonzeroOnNonEdge { i, j, value });
            }
        }
    }
    Ok(out)
}

/// Sampling ranges for `random_well_signed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomParams {
    pub edge_min: f64,
    pub edge_max: f64,
    pub diag_min: f64,
    pub diag_max: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            edge_min: -2.0,
            edge_max: -0.1,
            diag_min: -1.0,
            diag_max: 1.0,
        }
    }
}

/// Edge entries uniform in `[edge_min, edge_max]`, diagonal uniform in
/// `[diag_min, diag_max]`, zero elsewhere. Entries are drawn in packed
/// lower-triangle order from a ChaCha8 stream seeded with `seed`.
pub fn random_well_signed(g: &Graph, seed: u64, params: RandomParams) -> WellSignedMatrix {
    assert!(params.edge_max < 0.0, "edge range must be strictly negative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = SymMatrix::from_fn(g.n(), |i, j| {
        if i == j {
            rng.gen_range(params.diag_min..=params.diag_max)
        } else if g.has_edge(i, j) {
            rng.gen_range(params.edge_min..=params.edge_max)
        } else {
            0.0
        }
    });
    WellSignedMatrix {
        graph: g.clone(),
        matrix,
    }
}

/// `M - (λ_2(M) - delta) I`. For connected G the smallest eigenvalue of a
/// well-signed matrix is simple (Perron-Frobenius), so the result has exactly
/// one negative eigenvalue, and corank >= 1 when `delta = 0`.
pub fn shift_to_one_negative(m: &WellSignedMatrix, delta: f64) -> Result<WellSignedMatrix> {
    if !m.graph.is_connected() {
        return Err(Error::Disconnected);
    }
    if m.n() < 2 {
        return Err(Error::TooSmall("shift needs at least 2 vertices".into()));
    }
    let spec = eigen_sym(&m.matrix, None)?;
    Ok(m.shifted(-(spec.lambda(2) - delta)))
}

/// `-(p qᵀ + q pᵀ)` on K_{2,t} labelled as `complete_bipartite(2, t)`:
/// `p` is the indicator of `{0, 1}` and `q` of `{2, .., t+1}`. This is minus
/// the adjacency matrix; rank 2 with inertia `(1, t, 1)`.
pub fn k2t_witness(t: usize) -> WellSignedMatrix {
    assert!(t >= 1, "K_{{2,t}} needs t >= 1");
    let graph = generate_named("complete_bipartite", &[2, t as i64]).expect("K_{2,t}");
    let matrix = SymMatrix::from_fn(t + 2, |i, j| if (i < 2) != (j < 2) { -1.0 } else { 0.0 });
    WellSignedMatrix { graph, matrix }
}

pub fn k2t_witness_exact(t: usize) -> RatSymMatrix {
    let one = BigRational::from_integer(BigInt::from(1));
    SymMatrix::from_fn(t + 2, |i, j| {
        if (i < 2) != (j < 2) {
            -one.clone()
        } else {
            BigRational::from_integer(BigInt::from(0))
        }
    })
}

/// `-J` on the complete graph.
pub fn complete_witness(n: usize) -> WellSignedMatrix {
    let graph = generate_named("complete", &[n as i64]).expect("K_n");
    WellSignedMatrix {
        graph,
        matrix: SymMatrix::from_fn(n, |_, _| -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{inertia_exact, Inertia};
    use approx::assert_abs_diff_eq;

    fn k2() -> Graph {
        Graph::new(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let ok = SymMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(validate_well_signed(&k2(), &ok).unwrap().is_empty());
        let pos = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(
            validate_well_signed(&k2(), &pos).unwrap(),
            vec![Violation::PositiveOnEdge { i: 0, j: 1, value: 1.0 }]
        );
        let path = generate_named("path", &[3]).unwrap();
        let mut m = SymMatrix::from_fn(3, |i, j| if i.abs_diff(j) == 1 { -1.0 } else { 0.0 });
        m.set(0, 2, -0.5);
        assert_eq!(
            validate_well_signed(&path, &m).unwrap(),
            vec![Violation::NonzeroOnNonEdge { i: 0, j: 2, value: -0.5 }]
        );
        assert!(matches!(
            validate_well_signed(&path, &ok),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_generation_is_seeded_and_in_range() {
        let a = random_well_signed(&k2(), 0, RandomParams::default());
        assert!(validate_well_signed(&a.graph, &a.matrix).unwrap().is_empty());
        assert_eq!(a, random_well_signed(&k2(), 0, RandomParams::default()));
        let c4 = generate_named("cycle", &[4]).unwrap();
        let m = random_well_signed(&c4, 7, RandomParams::default());
        for &(i, j) in c4.edges() {
            let v = *m.matrix.get(i, j);
            assert!((-2.0..=-0.1).contains(&v));
        }
        for i in 0..4 {
            assert!((-1.0..=1.0).contains(m.matrix.get(i, i)));
        }
    }

    #[test]
    fn shift_examples() {
        let k4 = complete_witness(4);
        let shifted = shift_to_one_negative(&k4, 0.0).unwrap();
        assert!((shifted.matrix.max_abs() - 1.0).abs() < 1e-12);
        for i in 0..4 {
            assert_abs_diff_eq!(*shifted.matrix.get(i, i), -1.0, epsilon = 1e-12);
        }

        let m = WellSignedMatrix::new(k2(), SymMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap())
            .unwrap();
        let s = shift_to_one_negative(&m, 0.5).unwrap();
        assert_abs_diff_eq!(*s.matrix.get(0, 0), -0.5, epsilon = 1e-14);
        let spec = eigen_sym(&s.matrix, None).unwrap();
        assert_abs_diff_eq!(spec.eigenvalues[0], -1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(spec.eigenvalues[1], 0.5, epsilon = 1e-14);

        let c4 = generate_named("cycle", &[4]).unwrap();
        let adj = SymMatrix::from_fn(4, |i, j| if c4.has_edge(i, j) { -1.0 } else { 0.0 });
        let s = shift_to_one_negative(&WellSignedMatrix::new(c4, adj).unwrap(), 0.0).unwrap();
        let spec = eigen_sym(&s.matrix, None).unwrap();
        for (a, b) in spec.eigenvalues.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_eq!((spec.neg_count, spec.zero_count), (1, 2));
    }

    #[test]
    fn shift_rejects_disconnected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let m = random_well_signed(&g, 1, RandomParams::default());
        assert_eq!(shift_to_one_negative(&m, 0.0), Err(Error::Disconnected));
    }

    #[test]
    fn k2t_witness_inertia() {
        for t in 1..=6 {
            let w = k2t_witness(t);
            assert!(validate_well_signed(&w.graph, &w.matrix).unwrap().is_empty());
            let exact = inertia_exact(&k2t_witness_exact(t));
            assert_eq!(exact, Inertia { neg: 1, zero: t, pos: 1 });
            let spec = eigen_sym(&w.matrix, None).unwrap();
            assert_eq!((spec.neg_count, spec.zero_count, spec.pos_count), (1, t, 1));
            assert_abs_diff_eq!(spec.eigenvalues[0], -(2.0 * t as f64).sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn k2t_kernel_vectors() {
        let t = 4;
        let w = k2t_witness(t);
        // x_a = x_b = 0 and sum over the c side zero, plus e_a - e_b
        let mut vectors = vec![vec![1.0, -1.0, 0.0, 0.0, 0.0, 0.0]];
        for k in 3..t + 2 {
            let mut x = vec![0.0; t + 2];
            x[2] = 1.0;
            x[k] = -1.0;
            vectors.push(x);
        }
        for x in vectors {
            assert!(w.matrix.mul_vec(&x).iter().all(|v| v.abs() < 1e-15));
        }
    }
}
