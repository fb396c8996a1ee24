//! Circuit matrices from planar vector configurations, the in-plane circuit
//! walk, sums of circuit matrices and eigenvalue traces along `βA + M`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::{spanned_complex, NullspaceEmbedding, Plane, GEOM_TOL};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectra::{eigen_sym, SymMatrix};

fn det(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitMatrix {
    /// Vertex ids in cyclic order.
    pub circuit: Vec<usize>,
    /// Indexed by circuit position.
    #[serde(serialize_with = "serialize_rows")]
    pub matrix: SymMatrix,
    /// Largest `|A x|` over the two coordinate slices.
    pub kernel_residual: f64,
}

fn serialize_rows<S: serde::Serializer>(m: &SymMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&m.rows(), s)
}

impl CircuitMatrix {
    /// n×n matrix with the circuit entries at their vertex ids, zero elsewhere.
    pub fn embedded(&self, n: usize) -> Result<SymMatrix> {
        if let Some(&v) = self.circuit.iter().find(|&&v| v >= n) {
            return Err(Error::SizeMismatch(v, n));
        }
        let mut out = SymMatrix::zeros(n);
        for (p, &a) in self.circuit.iter().enumerate() {
            for (q, &b) in self.circuit.iter().enumerate().take(p + 1) {
                out.set(a, b, *self.matrix.get(p, q));
            }
        }
        Ok(out)
    }

    pub fn graph(&self, n: usize) -> Result<Graph> {
        let len = self.circuit.len();
        Graph::new(n, (0..len).map(|p| (self.circuit[p], self.circuit[(p + 1) % len])))
    }
}

/// `a_ij = -1/|det(u_i, u_j)|` on circuit edges and `a_jj` chosen so that
/// `a_ij u_i + a_jj u_j + a_jk u_k = 0`. `u2d[p]` belongs to `cycle[p]`.
pub fn circuit_matrix(cycle: &[usize], u2d: &[[f64; 2]]) -> Result<CircuitMatrix> {
    let len = cycle.len();
    if len < 3 {
        return Err(Error::Invalid(format!("a circuit needs at least 3 vertices, got {len}")));
    }
    if u2d.len() != len {
        return Err(Error::SizeMismatch(u2d.len(), len));
    }
    for p in 0..len {
        let q = (p + 1) % len;
        let scale = norm(u2d[p]) * norm(u2d[q]);
        if scale == 0.0 || det(u2d[p], u2d[q]).abs() <= GEOM_TOL * scale {
            return Err(Error::DependentConsecutive(p, q));
        }
    }
    for j in 0..len {
        let (i, k) = ((j + len - 1) % len, (j + 1) % len);
        if det(u2d[i], u2d[j]) * det(u2d[j], u2d[k]) <= 0.0 {
            return Err(Error::SidesConditionViolated(j));
        }
    }
    let mut a = SymMatrix::zeros(len);
    for p in 0..len {
        let q = (p + 1) % len;
        a.set(p, q, -1.0 / det(u2d[p], u2d[q]).abs());
    }
    for j in 0..len {
        let (i, k) = ((j + len - 1) % len, (j + 1) % len);
        let (aij, ajk) = (*a.get(i, j), *a.get(j, k));
        let v = [aij * u2d[i][0] + ajk * u2d[k][0], aij * u2d[i][1] + ajk * u2d[k][1]];
        let uj = u2d[j];
        a.set(j, j, -(v[0] * uj[0] + v[1] * uj[1]) / (uj[0] * uj[0] + uj[1] * uj[1]));
    }
    let mut kernel_residual: f64 = 0.0;
    for c in 0..2 {
        let x: Vec<f64> = u2d.iter().map(|u| u[c]).collect();
        for r in a.mul_vec(&x) {
            kernel_residual = kernel_residual.max(r.abs());
        }
    }
    Ok(CircuitMatrix {
        circuit: cycle.to_vec(),
        matrix: a,
        kernel_residual,
    })
}

/// Vertices of the regular n-gon, vertex k at angle `2πk/n`.
pub fn regular_polygon(n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            [t.cos(), t.sin()]
        })
        .collect()
}

/// Planes of `|G|` other than `plane` meeting it in a line shared by two of
/// them; returned as pairs of plane indices into the spanned complex.
pub fn plane_hypothesis_violations(g: &Graph, u: &NullspaceEmbedding, plane: &Plane) -> Result<Vec<(usize, usize)>> {
    let planes = spanned_complex(g, u)?.planes;
    let others: Vec<usize> = (0..planes.len())
        .filter(|&k| !planes[k].subspace.same_as(&plane.subspace))
        .collect();
    let mut out = Vec::new();
    for (x, &r) in others.iter().enumerate() {
        let pr = plane.subspace.intersection(&planes[r].subspace);
        if pr.dim() == 0 {
            continue;
        }
        for &s in &others[x + 1..] {
            if pr.intersection_dim(&planes[s].subspace) >= 1 {
                out.push((r, s));
            }
        }
    }
    Ok(out)
}

/// Walk inside `plane` from its first supporting edge: at each step move from
/// `j` to the lowest-indexed neighbour in the plane lying strictly on the other
/// side of the line `⟨u_j⟩` from the previous vertex. Stops at the first
/// repeated vertex and builds the circuit matrix of the closed part.
pub fn walk_plane_circuit(g: &Graph, u: &NullspaceEmbedding, plane: &Plane) -> Result<CircuitMatrix> {
    let &(start, second) = plane
        .edges
        .first()
        .ok_or_else(|| Error::Invalid("plane has no supporting edge".into()))?;
    let in_plane = plane.vertices(u);
    let coords: Vec<[f64; 2]> = u.vectors.iter().map(|v| plane.coords(v)).collect();
    let mut walk = vec![start, second];
    loop {
        let (i, j) = (walk[walk.len() - 2], walk[walk.len() - 1]);
        let side = det(coords[i], coords[j]);
        let scale = |k: usize| norm(coords[j]) * norm(coords[k]);
        let next = g.neighbors(j).iter().copied().find(|&k| {
            in_plane.binary_search(&k).is_ok() && {
                let d = det(coords[j], coords[k]);
                d * side > 0.0 && d.abs() > GEOM_TOL * scale(k)
            }
        });
        let Some(k) = next else {
            return Err(Error::WalkStuck(format!(
                "vertex {j} (reached from {i}) has no neighbour in the plane across the line through it; walk so far {walk:?}"
            )));
        };
        if let Some(pos) = walk.iter().position(|&v| v == k) {
            let circuit = walk[pos..].to_vec();
            let pts: Vec<[f64; 2]> = circuit.iter().map(|&v| coords[v]).collect();
            return circuit_matrix(&circuit, &pts);
        }
        walk.push(k);
    }
}

/// `walk_plane_circuit` after checking that no line of `plane` lies on two
/// other planes of `|G|`.
pub fn find_plane_circuit(g: &Graph, u: &NullspaceEmbedding, plane: &Plane) -> Result<CircuitMatrix> {
    if u.d() < 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: u.d(),
        });
    }
    if let Some(&(r, s)) = plane_hypothesis_violations(g, u, plane)?.first() {
        return Err(Error::HypothesisViolated(format!(
            "planes {r} and {s} of |G| share a line with the walk plane"
        )));
    }
    walk_plane_circuit(g, u, plane)
}

/// Sum of circuit matrices embedded at their vertex ids in an n×n matrix.
pub fn compose_plane_matrices(parts: &[&CircuitMatrix], n: usize) -> Result<SymMatrix> {
    let mut out = SymMatrix::zeros(n);
    for p in parts {
        out = out.add(&p.embedded(n)?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationParams {
    pub beta_max: f64,
    pub steps: usize,
    pub bisections: usize,
}

impl Default for InterpolationParams {
    fn default() -> Self {
        InterpolationParams {
            beta_max: 10.0,
            steps: 200,
            bisections: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub beta: f64,
    pub eigenvalues: Vec<f64>,
    pub lambda_minus: usize,
    pub corank: usize,
}

/// A change of `λ⁻` between consecutive grid points, narrowed by bisection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationTrace {
    pub points: Vec<TracePoint>,
    pub transitions: Vec<Transition>,
    /// Smallest grid β with `λ⁻(βA + M) >= 2`.
    pub first_two_negative: Option<f64>,
    pub base_corank: usize,
    /// `corank(βA + M) >= corank(M)` at every grid point.
    pub corank_bound_holds: bool,
    pub kernel_residual: f64,
    pub tol: f64,
}

impl InterpolationTrace {
    /// `beta,l1,..,ln` header, then one row per grid point.
    pub fn to_csv(&self) -> String {
        let n = self.points.first().map_or(0, |p| p.eigenvalues.len());
        let mut out = String::from("beta");
        for k in 1..=n {
            write!(out, ",l{k}").unwrap();
        }
        out.push('\n');
        for p in &self.points {
            write!(out, "{:.17e}", p.beta).unwrap();
            for x in &p.eigenvalues {
                write!(out, ",{x:.17e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn point(a: &SymMatrix, m: &SymMatrix, beta: f64, tol: f64) -> Result<TracePoint> {
    let s = eigen_sym(&a.scaled(beta).add(m)?, Some(tol))?;
    Ok(TracePoint {
        beta,
        lambda_minus: s.neg_count,
        corank: s.corank(),
        eigenvalues: s.eigenvalues,
    })
}

/// Eigenvalues of `βA + M` on `β = k·beta_max/steps`, after checking
/// `ker M ⊆ ker A`. `tol` defaults to M's default tolerance and is used for
/// every eigenvalue count.
pub fn interpolation_trace(
    a: &SymMatrix,
    m: &SymMatrix,
    params: InterpolationParams,
    tol: Option<f64>,
) -> Result<InterpolationTrace> {
    if a.n() != m.n() {
        return Err(Error::SizeMismatch(a.n(), m.n()));
    }
    if params.steps == 0 || params.beta_max.is_nan() || params.beta_max <= 0.0 {
        return Err(Error::Invalid("interpolation needs steps >= 1 and beta_max > 0".into()));
    }
    let tol = tol.unwrap_or_else(|| m.default_tol());
    let base = eigen_sym(m, Some(tol))?;
    let kernel_residual = base
        .kernel_basis
        .iter()
        .flat_map(|b| a.mul_vec(b))
        .fold(0.0, |acc: f64, x| acc.max(x.abs()));
    if kernel_residual > 1e-8 * a.max_abs().max(1.0) {
        return Err(Error::KernelNotContained(kernel_residual));
    }
    let points = (0..=params.steps)
        .into_par_iter()
        .map(|k| point(a, m, params.beta_max * k as f64 / params.steps as f64, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut transitions = Vec::new();
    for w in points.windows(2) {
        if w[0].lambda_minus == w[1].lambda_minus {
            continue;
        }
        let (mut lo, mut hi) = (w[0].beta, w[1].beta);
        for _ in 0..params.bisections {
            let mid = (lo + hi) / 2.0;
            if point(a, m, mid, tol)?.lambda_minus == w[0].lambda_minus {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        transitions.push(Transition {
            beta_lo: lo,
            beta_hi: hi,
            from: w[0].lambda_minus,
            to: w[1].lambda_minus,
        });
    }
    Ok(InterpolationTrace {
        first_two_negative: points.iter().find(|p| p.lambda_minus >= 2).map(|p| p.beta),
        base_corank: base.corank(),
        corank_bound_holds: points.iter().all(|p| p.corank >= base.corank()),
        points,
        transitions,
        kernel_residual,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::NullspaceEmbedding;
    use crate::gmatrix::validate_well_signed;
    use approx::assert_abs_diff_eq;

    #[test]
    fn square() {
        let c = circuit_matrix(&[0, 1, 2, 3], &regular_polygon(4)).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(*c.matrix.get(i, i), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(*c.matrix.get(i, (i + 1) % 4), -1.0, epsilon = 1e-12);
        }
        let s = eigen_sym(&c.matrix, None).unwrap();
        for (x, y) in s.eigenvalues.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangle() {
        let c = circuit_matrix(&[0, 1, 2], &regular_polygon(3)).unwrap();
        let a = -2.0 / 3f64.sqrt();
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(*c.matrix.get(i, j), a, epsilon = 1e-12);
            }
        }
        let s = eigen_sym(&c.matrix, None).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], -2.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert_eq!(s.corank(), 2);
    }

    #[test]
    fn pentagon() {
        let c = circuit_matrix(&[0, 1, 2, 3, 4], &regular_polygon(5)).unwrap();
        let s72 = (72f64).to_radians().sin();
        let c72 = (72f64).to_radians().cos();
        assert_abs_diff_eq!(*c.matrix.get(0, 1), -1.0 / s72, epsilon = 1e-12);
        assert_abs_diff_eq!(*c.matrix.get(0, 0), 2.0 * c72 / s72, epsilon = 1e-12);
        let s = eigen_sym(&c.matrix, None).unwrap();
        assert_eq!((s.neg_count, s.corank()), (1, 2));
    }

    #[test]
    fn rejects_bad_configurations() {
        let pts = [[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]];
        assert_eq!(circuit_matrix(&[0, 1, 2], &pts).unwrap_err(), Error::DependentConsecutive(0, 1));
        // all consecutive determinants nonzero but the walk turns back at vertex 1
        let pts = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [-1.0, -0.5]];
        assert!(matches!(
            circuit_matrix(&[0, 1, 2, 3], &pts),
            Err(Error::SidesConditionViolated(_))
        ));
    }

    #[test]
    fn embedded_matrix_is_well_signed() {
        let c = circuit_matrix(&[4, 0, 2], &regular_polygon(3)).unwrap();
        let big = c.embedded(5).unwrap();
        let g = c.graph(5).unwrap();
        assert!(validate_well_signed(&g, &big).unwrap().is_empty());
        assert_eq!(*big.get(1, 1), 0.0);
        assert_eq!(c.embedded(4).unwrap_err(), Error::SizeMismatch(4, 4));
    }

    #[test]
    fn square_walk() {
        let c4 = crate::graph::generate_named("cycle", &[4]).unwrap();
        let u = NullspaceEmbedding::new(regular_polygon(4).iter().map(|p| p.to_vec()).collect()).unwrap();
        let plane = spanned_complex(&c4, &u).unwrap().planes.remove(0);
        let c = find_plane_circuit(&c4, &u, &plane).unwrap();
        let mut vs = c.circuit.clone();
        vs.sort();
        assert_eq!(vs, vec![0, 1, 2, 3]);
        assert!(c.kernel_residual < 1e-12);
    }

    #[test]
    fn walk_gets_stuck_on_a_path() {
        let p = crate::graph::generate_named("path", &[3]).unwrap();
        let u = NullspaceEmbedding::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let plane = spanned_complex(&p, &u).unwrap().planes.remove(0);
        assert!(matches!(walk_plane_circuit(&p, &u, &plane), Err(Error::WalkStuck(_))));
    }

    #[test]
    fn composition_of_disjoint_squares() {
        let a = circuit_matrix(&[0, 1, 2, 3], &regular_polygon(4)).unwrap();
        let b = circuit_matrix(&[4, 5, 6, 7], &regular_polygon(4)).unwrap();
        let sum = compose_plane_matrices(&[&a, &b], 8).unwrap();
        let s = eigen_sym(&sum, None).unwrap();
        assert_eq!((s.neg_count, s.corank()), (2, 4));
        assert_eq!(compose_plane_matrices(&[&a], 4).unwrap(), a.matrix);
    }

    #[test]
    fn trivial_interpolations() {
        let m = circuit_matrix(&[0, 1, 2, 3, 4], &regular_polygon(5)).unwrap().matrix;
        let params = InterpolationParams {
            steps: 20,
            ..Default::default()
        };
        let t = interpolation_trace(&m, &m, params, None).unwrap();
        assert!(t.points.iter().all(|p| p.lambda_minus == 1));
        assert!(t.transitions.is_empty() && t.corank_bound_holds);
        assert_eq!(t.first_two_negative, None);

        let t = interpolation_trace(&SymMatrix::zeros(5), &m, params, None).unwrap();
        assert!(t.points.iter().all(|p| p.eigenvalues == t.points[0].eigenvalues));
        assert_eq!(t.points.len(), 21);
        assert!(t.to_csv().starts_with("beta,l1,l2,l3,l4,l5\n"));
    }

    #[test]
    fn kernel_containment_is_checked() {
        let m = circuit_matrix(&[0, 1, 2, 3], &regular_polygon(4)).unwrap().matrix;
        assert!(matches!(
            interpolation_trace(&SymMatrix::identity(4), &m, InterpolationParams::default(), None),
            Err(Error::KernelNotContained(_))
        ));
    }

    #[test]
    fn transition_is_localised() {
        // M = diag(-1, 0, 1), A = diag(0, 0, -1): λ⁻ goes 1 -> 2 at β = 1
        let m = SymMatrix::from_fn(3, |i, j| if i == j { i as f64 - 1.0 } else { 0.0 });
        let a = SymMatrix::from_fn(3, |i, j| if i == j && i == 2 { -1.0 } else { 0.0 });
        let t = interpolation_trace(&a, &m, InterpolationParams::default(), None).unwrap();
        assert_eq!(t.transitions.len(), 1);
        let tr = &t.transitions[0];
        assert_eq!((tr.from, tr.to), (1, 2));
        assert!((tr.beta_lo - 1.0).abs() < 1e-8 && (tr.beta_hi - 1.0).abs() < 1e-8 && tr.beta_hi - tr.beta_lo < 1e-8);
        assert!(t.first_two_negative.unwrap() > 1.0);
    }
}
