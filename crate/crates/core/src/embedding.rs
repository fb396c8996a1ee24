//! Nullspace embeddings and the spanned complex `|G|` of lines and planes.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{orthonormalize, right_singular_pairs};
use crate::sap::{classify_quadric, hyperplane_factors, quadric_kernel, QuadricClass};
use crate::spectra::{eigen_sym, SymMatrix};

/// Zero and dependence threshold for embedding vectors.
pub const GEOM_TOL: f64 = 1e-7;
/// Largest principal angle (as a sine) at which two subspaces count as equal.
pub const ANGLE_TOL: f64 = 1e-6;

/// Vertex `i` maps to `u_i`, the vector of i-th coordinates of a kernel basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullspaceEmbedding {
    d: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl NullspaceEmbedding {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::EmptyEmbedding);
        }
        if let Some(bad) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(NullspaceEmbedding { d, vectors })
    }

    /// `basis[j]` is the j-th kernel vector; `u_i[j] = basis[j][i]`.
    pub fn from_kernel_basis(basis: &[Vec<f64>]) -> Self {
        let d = basis.len();
        let n = basis.first().map_or(0, Vec::len);
        NullspaceEmbedding {
            d,
            vectors: (0..n).map(|i| basis.iter().map(|b| b[i]).collect()).collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// The d×n matrix with columns `u_i`.
    pub fn u_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.d, self.n(), |a, i| self.vectors[i][a])
    }

    /// Apply a d×d linear map to every vector.
    pub fn transformed(&self, map: &DMatrix<f64>) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|u| (map * DVector::from_column_slice(u)).iter().copied().collect())
            .collect();
        NullspaceEmbedding { d: self.d, vectors }
    }

    /// `vertex,x1,..,xd` header, then one row per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex");
        for a in 1..=self.d {
            write!(out, ",x{a}").unwrap();
        }
        out.push('\n');
        for (i, u) in self.vectors.iter().enumerate() {
            write!(out, "{i}").unwrap();
            for x in u {
                write!(out, ",{x:.17e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn nullspace_embedding(m: &SymMatrix, tol: Option<f64>) -> Result<NullspaceEmbedding> {
    let spec = eigen_sym(m, tol)?;
    if spec.corank() == 0 {
        return Err(Error::EmptyKernel);
    }
    Ok(NullspaceEmbedding::from_kernel_basis(&spec.kernel_basis))
}

/// A linear subspace of R^d held by an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subspace {
    pub basis: Vec<Vec<f64>>,
}

impl Subspace {
    /// Span of `vectors`, Gram-Schmidt in the given order.
    pub fn span(vectors: &[&[f64]]) -> Subspace {
        let d = vectors.first().map_or(0, |v| v.len());
        let cols = DMatrix::from_fn(d, vectors.len(), |a, k| vectors[k][a]);
        let q = orthonormalize_tol(&cols);
        Subspace {
            basis: q.column_iter().map(|c| c.iter().copied().collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }

    pub fn matrix(&self, d: usize) -> DMatrix<f64> {
        DMatrix::from_fn(d, self.dim(), |a, k| self.basis[k][a])
    }

    /// Distance of the unit vector `v/|v|` from the subspace.
    pub fn contains(&self, v: &[f64]) -> bool {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return true;
        }
        let mut r: Vec<f64> = v.iter().map(|x| x / norm).collect();
        for b in &self.basis {
            let c: f64 = b.iter().zip(&r).map(|(p, q)| p * q).sum();
            for (x, y) in r.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        r.iter().map(|x| x * x).sum::<f64>().sqrt() <= ANGLE_TOL
    }

    /// Sines of the principal angles between `other` and `self`, ascending,
    /// paired with the corresponding vectors of `other`.
    fn angles_from(&self, other: &Subspace) -> Vec<(f64, DVector<f64>)> {
        let d = self.ambient().max(other.ambient());
        if other.dim() == 0 {
            return Vec::new();
        }
        let q1 = self.matrix(d);
        let q2 = other.matrix(d);
        let residual = &q2 - &q1 * (q1.transpose() * &q2);
        right_singular_pairs(&residual)
            .into_iter()
            .map(|(s, w)| (s, &q2 * w))
            .collect()
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.angles_from(other).iter().filter(|(s, _)| *s <= ANGLE_TOL).count()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let vectors: Vec<Vec<f64>> = self
            .angles_from(other)
            .into_iter()
            .filter(|(s, _)| *s <= ANGLE_TOL)
            .map(|(_, w)| w.iter().copied().collect())
            .collect();
        let refs: Vec<&[f64]> = vectors.iter().map(Vec::as_slice).collect();
        Subspace::span(&refs)
    }

    /// Equal dimension and largest principal angle within `ANGLE_TOL`.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.intersection_dim(other) == self.dim()
    }
}

fn orthonormalize_tol(cols: &DMatrix<f64>) -> DMatrix<f64> {
    // drop directions that are dependent at GEOM_TOL, not just at rounding level
    let mut kept: Vec<DVector<f64>> = Vec::new();
    for c in cols.column_iter() {
        let norm = c.norm();
        if norm <= GEOM_TOL {
            continue;
        }
        let mut v: DVector<f64> = c.into_owned() / norm;
        for _ in 0..2 {
            for q in &kept {
                let dot = q.dot(&v);
                v.axpy(-dot, q, 1.0);
            }
        }
        let r = v.norm();
        if r > GEOM_TOL {
            kept.push(v / r);
        }
    }
    if kept.is_empty() {
        DMatrix::zeros(cols.nrows(), 0)
    } else {
        orthonormalize(&DMatrix::from_columns(&kept))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Line {
    pub subspace: Subspace,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Plane {
    /// Gram-Schmidt of the first supporting edge `(u_i, u_j)`.
    pub subspace: Subspace,
    pub edges: Vec<(usize, usize)>,
}

impl Plane {
    /// Vertices whose vector lies in the plane (zero vectors excluded).
    pub fn vertices(&self, u: &NullspaceEmbedding) -> Vec<usize> {
        (0..u.n())
            .filter(|&i| !is_zero(&u.vectors[i]) && self.subspace.contains(&u.vectors[i]))
            .collect()
    }

    /// Coordinates of `v` in the plane's basis.
    pub fn coords(&self, v: &[f64]) -> [f64; 2] {
        let b = &self.subspace.basis;
        let dot = |w: &[f64]| w.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        [dot(&b[0]), dot(&b[1])]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpannedComplex {
    pub lines: Vec<Line>,
    pub planes: Vec<Plane>,
    /// Edges whose endpoint vectors are dependent; they span a line, not a plane.
    pub degenerate_edges: Vec<(usize, usize)>,
    /// Vertices with `u_i = 0`, left out of every line.
    pub zero_vertices: Vec<usize>,
}

fn is_zero(v: &[f64]) -> bool {
    v.iter().map(|x| x * x).sum::<f64>().sqrt() <= GEOM_TOL
}

/// Lines `⟨u_i⟩` and edge planes `⟨u_i, u_j⟩`, deduplicated by principal angle.
pub fn spanned_complex(g: &Graph, u: &NullspaceEmbedding) -> Result<SpannedComplex> {
    if u.d() == 0 {
        return Err(Error::EmptyEmbedding);
    }
    if g.n() != u.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: u.n(),
        });
    }
    let mut out = SpannedComplex {
        lines: Vec::new(),
        planes: Vec::new(),
        degenerate_edges: Vec::new(),
        zero_vertices: Vec::new(),
    };
    for (i, v) in u.vectors.iter().enumerate() {
        if is_zero(v) {
            out.zero_vertices.push(i);
            continue;
        }
        let s = Subspace::span(&[v]);
        match out.lines.iter_mut().find(|l| l.subspace.same_as(&s)) {
            Some(line) => line.vertices.push(i),
            None => out.lines.push(Line {
                subspace: s,
                vertices: vec![i],
            }),
        }
    }
    for &(i, j) in g.edges() {
        let s = Subspace::span(&[&u.vectors[i], &u.vectors[j]]);
        if s.dim() < 2 {
            out.degenerate_edges.push((i, j));
            continue;
        }
        match out.planes.iter_mut().find(|p| p.subspace.same_as(&s)) {
            Some(plane) => plane.edges.push((i, j)),
            None => out.planes.push(Plane {
                subspace: s,
                edges: vec![(i, j)],
            }),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperplaneSplit {
    pub normal: Vec<f64>,
    pub side_pos: Vec<usize>,
    pub on: Vec<usize>,
    pub side_neg: Vec<usize>,
    /// Both open sides nonempty, each inducing a connected subgraph.
    pub condition_i: bool,
    /// On-hyperplane vertices with a neighbour on exactly one open side.
    pub one_sided: Vec<usize>,
}

impl HyperplaneSplit {
    pub fn condition_ii(&self) -> bool {
        self.one_sided.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.condition_i && self.condition_ii()
    }
}

/// Classify vertices by the sign of `⟨normal, u_i⟩` (normal rescaled to unit
/// length); values within `tol` (default `GEOM_TOL`) are on the hyperplane.
pub fn hyperplane_split(g: &Graph, u: &NullspaceEmbedding, normal: &[f64], tol: Option<f64>) -> Result<HyperplaneSplit> {
    if normal.len() != u.d() {
        return Err(Error::DimensionMismatch {
            expected: u.d(),
            found: normal.len(),
        });
    }
    let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNormal);
    }
    let tol = tol.unwrap_or(GEOM_TOL);
    let (mut side_pos, mut on, mut side_neg) = (Vec::new(), Vec::new(), Vec::new());
    for (i, v) in u.vectors.iter().enumerate() {
        let s: f64 = v.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() / norm;
        if s > tol {
            side_pos.push(i);
        } else if s < -tol {
            side_neg.push(i);
        } else {
            on.push(i);
        }
    }
    let condition_i = g.induces_connected(&side_pos) && g.induces_connected(&side_neg);
    let one_sided = on
        .iter()
        .copied()
        .filter(|&v| {
            let pos = g.neighbors(v).iter().any(|w| side_pos.binary_search(w).is_ok());
            let neg = g.neighbors(v).iter().any(|w| side_neg.binary_search(w).is_ok());
            pos != neg
        })
        .collect();
    Ok(HyperplaneSplit {
        normal: normal.iter().map(|x| x / norm).collect(),
        side_pos,
        on,
        side_neg,
        condition_i,
        one_sided,
    })
}

/// Normals of all hyperplanes spanned by `d-1` distinct vertex directions.
pub fn spanned_hyperplanes(complex: &SpannedComplex, d: usize) -> Vec<Vec<f64>> {
    let dirs: Vec<&[f64]> = complex.lines.iter().map(|l| l.subspace.basis[0].as_slice()).collect();
    let mut normals: Vec<Vec<f64>> = Vec::new();
    if d < 2 || dirs.len() < d - 1 {
        return normals;
    }
    let mut pick: Vec<usize> = (0..d - 1).collect();
    loop {
        let chosen: Vec<&[f64]> = pick.iter().map(|&k| dirs[k]).collect();
        if Subspace::span(&chosen).dim() == d - 1 {
            let v = DMatrix::from_fn(d, d - 1, |a, k| chosen[k][a]);
            let gram = SymMatrix::from_dense(&(&v * v.transpose()));
            let (_, vectors, _) = crate::spectra::jacobi(&gram);
            let normal = vectors[0].clone();
            let duplicate = normals.iter().any(|m| {
                let dot: f64 = m.iter().zip(&normal).map(|(a, b)| a * b).sum();
                (1.0 - dot.abs()) <= ANGLE_TOL * ANGLE_TOL
            });
            if !duplicate {
                normals.push(normal);
            }
        }
        // next (d-1)-subset in lexicographic order
        let k = d - 1;
        let Some(pos) = (0..k).rev().find(|&p| pick[p] < dirs.len() - k + p) else {
            break;
        };
        pick[pos] += 1;
        for q in pos + 1..k {
            pick[q] = pick[q - 1] + 1;
        }
    }
    normals
}

#[derive(Debug, Clone, Serialize)]
pub struct VdhReport {
    pub d: usize,
    pub hyperplanes_checked: usize,
    pub failures: Vec<HyperplaneSplit>,
}

impl VdhReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the two-sided split checks on every spanned hyperplane of the
/// nullspace embedding of `m`.
pub fn check_vdh_all(g: &Graph, m: &SymMatrix, tol: Option<f64>) -> Result<VdhReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let spec = eigen_sym(m, tol)?;
    let d = spec.corank();
    if d < 2 {
        return Err(Error::CorankTooSmall(d));
    }
    let u = NullspaceEmbedding::from_kernel_basis(&spec.kernel_basis);
    let complex = spanned_complex(g, &u)?;
    let normals = spanned_hyperplanes(&complex, d);
    let mut failures = Vec::new();
    for normal in &normals {
        let split = hyperplane_split(g, &u, normal, None)?;
        if !split.passes() {
            failures.push(split);
        }
    }
    Ok(VdhReport {
        d,
        hyperplanes_checked: normals.len(),
        failures,
    })
}

fn require_d4(u: &NullspaceEmbedding) -> Result<()> {
    if u.d() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            found: u.d(),
        });
    }
    Ok(())
}

/// First pair of planes of `|G|` (in complex order) meeting only at 0.
pub fn find_disjoint_planes(g: &Graph, u: &NullspaceEmbedding) -> Result<Option<(Plane, Plane)>> {
    require_d4(u)?;
    let planes = spanned_complex(g, u)?.planes;
    for a in 0..planes.len() {
        for b in a + 1..planes.len() {
            if planes[a].subspace.intersection_dim(&planes[b].subspace) == 0 {
                return Ok(Some((planes[a].clone(), planes[b].clone())));
            }
        }
    }
    Ok(None)
}

/// Distinct planes with `P1 ∩ P2 ∩ P3 ≠ 0` and `P1 ∩ P4 = 0`, first ordered
/// 4-tuple in complex order.
pub fn find_plane_configuration(g: &Graph, u: &NullspaceEmbedding) -> Result<Option<[Plane; 4]>> {
    require_d4(u)?;
    let planes = spanned_complex(g, u)?.planes;
    let k = planes.len();
    let mut meet = vec![vec![0usize; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let dim = planes[a].subspace.intersection_dim(&planes[b].subspace);
            meet[a][b] = dim;
            meet[b][a] = dim;
        }
    }
    for p1 in 0..k {
        let Some(p4) = (0..k).find(|&x| x != p1 && meet[p1][x] == 0) else {
            continue;
        };
        for p2 in (0..k).filter(|&x| x != p1 && meet[p1][x] >= 1) {
            let line = planes[p1].subspace.intersection(&planes[p2].subspace);
            for p3 in (0..k).filter(|&x| x != p1 && x != p2 && meet[p1][x] >= 1) {
                if line.intersection_dim(&planes[p3].subspace) >= 1 {
                    // any P4 disjoint from P1 differs from P2 and P3
                    return Ok(Some([
                        planes[p1].clone(),
                        planes[p2].clone(),
                        planes[p3].clone(),
                        planes[p4].clone(),
                    ]));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HyperplaneCover {
    /// No pair of hyperplanes contains `|G|`.
    None,
    /// `|G| ⊆ {aᵀy = 0} ∪ {bᵀy = 0}`.
    Cover { a: Vec<f64>, b: Vec<f64> },
    /// Quadric kernel too large to search.
    Unknown { kernel_dim: usize },
}

/// Zero iff the form is reducible: everything beyond the two largest
/// eigenvalues (by magnitude), plus the smaller of those two when they share a
/// sign. Relative to the Frobenius norm.
fn reducibility_defect(n: &SymMatrix) -> f64 {
    let (mut values, _, _) = crate::spectra::jacobi(n);
    values.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let norm = values.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut defect: f64 = values.iter().skip(2).map(|x| x * x).sum();
    if values.len() >= 2 && values[0] * values[1] > 0.0 {
        defect += values[1] * values[1];
    }
    defect.sqrt() / norm
}

fn combine(n1: &SymMatrix, n2: &SymMatrix, theta: f64) -> SymMatrix {
    n1.scaled(theta.cos()).add(&n2.scaled(theta.sin())).expect("same size")
}

fn cover_from(n: &SymMatrix) -> Option<HyperplaneCover> {
    let tol = 1e-8 * n.max_abs();
    match classify_quadric(n, Some(tol)).ok()? {
        QuadricClass::Irreducible => None,
        _ => hyperplane_factors(n, Some(tol)).ok()?.map(|(a, b)| HyperplaneCover::Cover { a, b }),
    }
}

/// Whether `|G|` lies in a union of two hyperplanes, decided through the
/// quadric kernel. Kernels of dimension above 2 give `Unknown`.
pub fn two_hyperplane_cover(g: &Graph, u: &NullspaceEmbedding) -> Result<HyperplaneCover> {
    if u.d() < 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: u.d(),
        });
    }
    let q = quadric_kernel(g, u, None)?;
    match q.kernel_dim {
        0 => Ok(HyperplaneCover::None),
        1 => Ok(cover_from(&q.witnesses[0]).unwrap_or(HyperplaneCover::None)),
        2 => {
            let (n1, n2) = (&q.witnesses[0], &q.witnesses[1]);
            const STEP: f64 = 1e-3;
            let steps = (std::f64::consts::PI / STEP).ceil() as usize;
            let f = |t: f64| reducibility_defect(&combine(n1, n2, t));
            let values: Vec<f64> = (0..steps).map(|k| f(k as f64 * STEP)).collect();
            for k in 0..steps {
                let (prev, next) = (values[(k + steps - 1) % steps], values[(k + 1) % steps]);
                if values[k] > prev || values[k] > next || values[k] > 1e-2 {
                    continue;
                }
                // golden-section refinement on the bracketing cell pair
                let (mut lo, mut hi) = ((k as f64 - 1.0) * STEP, (k as f64 + 1.0) * STEP);
                let phi = (5f64.sqrt() - 1.0) / 2.0;
                for _ in 0..80 {
                    let a = hi - phi * (hi - lo);
                    let b = lo + phi * (hi - lo);
                    if f(a) <= f(b) {
                        hi = b;
                    } else {
                        lo = a;
                    }
                }
                let theta = (lo + hi) / 2.0;
                if f(theta) <= 1e-8 {
                    if let Some(cover) = cover_from(&combine(n1, n2, theta)) {
                        return Ok(cover);
                    }
                }
            }
            Ok(HyperplaneCover::None)
        }
        k => Ok(HyperplaneCover::Unknown { kernel_dim: k }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmatrix::complete_witness;
    use crate::graph::generate_named;

    fn square() -> (Graph, NullspaceEmbedding) {
        let c4 = generate_named("cycle", &[4]).unwrap();
        let m = SymMatrix::from_fn(4, |i, j| if c4.has_edge(i, j) { -1.0 } else { 0.0 });
        (c4, nullspace_embedding(&m, None).unwrap())
    }

    #[test]
    fn k4_embedding_sums_to_zero() {
        let w = complete_witness(4);
        let u = nullspace_embedding(&w.matrix, None).unwrap();
        assert_eq!(u.d(), 3);
        for a in 0..3 {
            assert!(u.vectors.iter().map(|v| v[a]).sum::<f64>().abs() < 1e-12);
        }
        for skip in 0..4 {
            let rest: Vec<&[f64]> = (0..4).filter(|&i| i != skip).map(|i| u.vectors[i].as_slice()).collect();
            assert_eq!(Subspace::span(&rest).dim(), 3);
        }
    }

    #[test]
    fn invertible_has_no_embedding() {
        assert_eq!(nullspace_embedding(&SymMatrix::identity(3), None), Err(Error::EmptyKernel));
    }

    #[test]
    fn square_opposites_are_antipodal() {
        let (_, u) = square();
        assert_eq!(u.d(), 2);
        for (i, j) in [(0, 2), (1, 3)] {
            for a in 0..2 {
                assert!((u.vectors[i][a] + u.vectors[j][a]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complex_counts() {
        let (c4, u) = square();
        let c = spanned_complex(&c4, &u).unwrap();
        assert_eq!((c.lines.len(), c.planes.len()), (2, 1));

        let w = complete_witness(4);
        let u = nullspace_embedding(&w.matrix, None).unwrap();
        let c = spanned_complex(&w.graph, &u).unwrap();
        assert_eq!((c.lines.len(), c.planes.len()), (4, 6));

        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        let u = NullspaceEmbedding::new(vec![vec![1.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let c = spanned_complex(&k2, &u).unwrap();
        assert_eq!((c.lines.len(), c.planes.len()), (2, 1));
    }

    #[test]
    fn zero_vertices_and_degenerate_edges() {
        let p = generate_named("path", &[3]).unwrap();
        let u = NullspaceEmbedding::new(vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let c = spanned_complex(&p, &u).unwrap();
        assert_eq!(c.zero_vertices, vec![1]);
        assert_eq!(c.lines.len(), 1);
        assert_eq!(c.lines[0].vertices, vec![0, 2]);
        assert_eq!(c.degenerate_edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn square_split_through_a_vertex() {
        let c4 = generate_named("cycle", &[4]).unwrap();
        let u = NullspaceEmbedding::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]])
            .unwrap();
        let s = hyperplane_split(&c4, &u, &[0.0, 1.0], None).unwrap();
        assert_eq!((s.side_pos.clone(), s.on.clone(), s.side_neg.clone()), (vec![1], vec![0, 2], vec![3]));
        assert!(s.passes());
        let s = hyperplane_split(&c4, &u, &[1.0, 1.0], None).unwrap();
        assert_eq!((s.side_pos.clone(), s.side_neg.clone()), (vec![0, 1], vec![2, 3]));
        assert!(s.passes());
        // every vector strictly on one side
        let shifted = NullspaceEmbedding::new((0..4).map(|k| vec![1.0, k as f64]).collect()).unwrap();
        let s = hyperplane_split(&c4, &shifted, &[1.0, 0.0], None).unwrap();
        assert!(s.side_neg.is_empty() && !s.condition_i);
        assert_eq!(hyperplane_split(&c4, &u, &[0.0, 0.0], None).unwrap_err(), Error::ZeroNormal);
    }

    #[test]
    fn one_sided_vertex_is_reported() {
        let p = generate_named("path", &[3]).unwrap();
        let u = NullspaceEmbedding::new(vec![vec![1.0], vec![0.0], vec![0.0]]).unwrap();
        let s = hyperplane_split(&p, &u, &[1.0], None).unwrap();
        assert_eq!(s.one_sided, vec![1]);
        assert!(!s.condition_i);
    }

    #[test]
    fn vdh_on_small_examples() {
        let c4 = generate_named("cycle", &[4]).unwrap();
        let m = SymMatrix::from_fn(4, |i, j| if c4.has_edge(i, j) { -1.0 } else { 0.0 });
        let r = check_vdh_all(&c4, &m, None).unwrap();
        assert_eq!((r.d, r.hyperplanes_checked), (2, 2));
        assert!(r.passed());

        let w = complete_witness(4);
        let r = check_vdh_all(&w.graph, &w.matrix, None).unwrap();
        assert_eq!(r.hyperplanes_checked, 6);
        assert!(r.passed());

        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        let m = SymMatrix::from_rows(&[vec![-1.0, -1.0], vec![-1.0, -1.0]]).unwrap();
        assert_eq!(check_vdh_all(&k2, &m, None).unwrap_err(), Error::CorankTooSmall(1));
    }

    fn k5_corank4() -> (Graph, NullspaceEmbedding) {
        let w = complete_witness(5);
        let u = nullspace_embedding(&w.matrix, None).unwrap();
        (w.graph, u)
    }

    #[test]
    fn k5_planes() {
        let (g, u) = k5_corank4();
        let (p, r) = find_disjoint_planes(&g, &u).unwrap().unwrap();
        assert_eq!(p.subspace.intersection_dim(&r.subspace), 0);
        let [p1, p2, p3, p4] = find_plane_configuration(&g, &u).unwrap().unwrap();
        let line = p1.subspace.intersection(&p2.subspace);
        assert_eq!(line.intersection_dim(&p3.subspace), 1);
        assert_eq!(p1.subspace.intersection_dim(&p4.subspace), 0);
        assert_eq!(two_hyperplane_cover(&g, &u).unwrap(), HyperplaneCover::None);
    }

    #[test]
    fn wrong_dimension() {
        let (c4, u) = square();
        assert!(matches!(find_disjoint_planes(&c4, &u), Err(Error::WrongDimension { .. })));
        assert!(matches!(find_plane_configuration(&c4, &u), Err(Error::WrongDimension { .. })));
    }

    #[test]
    fn planes_through_a_common_line() {
        // every vertex vector contains e1 in its edge plane: a star at vertex 0
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let e = |k: usize| (0..4).map(|a| if a == k { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
        let u = NullspaceEmbedding::new(vec![e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(find_disjoint_planes(&g, &u).unwrap(), None);
        assert_eq!(find_plane_configuration(&g, &u).unwrap(), None);
    }

    #[test]
    fn planted_two_hyperplane_cover() {
        // points in x1 = 0 and in x2 = 0; edges only inside each hyperplane
        let u = NullspaceEmbedding::new(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![0.0, 1.0, -1.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 0.0, -1.0],
        ])
        .unwrap();
        let g = Graph::new(7, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6)]).unwrap();
        let HyperplaneCover::Cover { a, b } = two_hyperplane_cover(&g, &u).unwrap() else {
            panic!("expected a cover");
        };
        for v in &u.vectors {
            let pa: f64 = a.iter().zip(v).map(|(x, y)| x * y).sum();
            let pb: f64 = b.iter().zip(v).map(|(x, y)| x * y).sum();
            assert!(pa.abs() < 1e-9 || pb.abs() < 1e-9);
        }
    }

    #[test]
    fn large_quadric_kernel_is_unknown() {
        // a single vertex in R^3 leaves 5 free quadric coefficients
        let u = NullspaceEmbedding::new(vec![vec![1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(
            two_hyperplane_cover(&Graph::empty(1), &u).unwrap(),
            HyperplaneCover::Unknown { kernel_dim: 5 }
        );
    }

    #[test]
    fn csv_export() {
        let u = NullspaceEmbedding::new(vec![vec![1.0, 0.0], vec![0.0, -0.5]]).unwrap();
        let csv = u.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "vertex,x1,x2");
        assert!(lines[2].starts_with("1,0"));
        assert_eq!(lines.len(), 3);
    }
}
