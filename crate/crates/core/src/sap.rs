//! The Strong Arnold Property as a linear kernel, the quadric-containment
//! kernel of a nullspace embedding, and the correspondence `X = UᵀNU`
//! between them.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::embedding::NullspaceEmbedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{nullspace, rank_exact, singular_values};
use crate::spectra::{eigen_sym, RatSymMatrix, SymMatrix};

#[derive(Debug, Clone, Serialize)]
pub struct SapReport {
    pub kernel_dim: usize,
    /// Number of free entries of X (non-adjacent distinct pairs).
    pub unknowns: usize,
    /// Orthonormal (in the free entries) basis of symmetric X with `MX = 0`
    /// and `X_ij = 0` on the diagonal and on edges.
    #[serde(serialize_with = "crate::io::serialize_sym_vec")]
    pub witnesses: Vec<SymMatrix>,
    /// Largest `|(MX)_ij|` over the witnesses.
    pub max_residual: f64,
    pub tol: f64,
}

fn check_dims(g: &Graph, n: usize) -> Result<()> {
    if g.n() != n {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: n,
        });
    }
    Ok(())
}

/// Coefficient matrix of `MX = 0` in the unknowns `X_pq` (p < q non-adjacent).
/// Row `i * n + k` is the entry `(MX)_ik`.
fn sap_system<T: Clone + Zero>(g: &Graph, m: &SymMatrix<T>, unknowns: &[(usize, usize)]) -> Vec<Vec<T>> {
    let n = g.n();
    let mut rows = vec![vec![T::zero(); unknowns.len()]; n * n];
    for (col, &(p, q)) in unknowns.iter().enumerate() {
        for i in 0..n {
            // X_pq = X_qp = 1: (MX)_iq += M_ip and (MX)_ip += M_iq
            rows[i * n + q][col] = m.get(i, p).clone();
            rows[i * n + p][col] = m.get(i, q).clone();
        }
    }
    rows
}

fn to_dense(rows: &[Vec<f64>], cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// Nullity of the SAP system; zero iff `M` has the Strong Arnold Property.
pub fn sap_kernel(g: &Graph, m: &SymMatrix, tol: Option<f64>) -> Result<SapReport> {
    check_dims(g, m.n())?;
    m.check_finite()?;
    let tol = tol.unwrap_or_else(|| m.default_tol());
    let unknowns = g.non_edges();
    let n = g.n();
    let system = to_dense(&sap_system(g, m, &unknowns), unknowns.len());
    let kernel = nullspace(&system, tol);
    let witnesses: Vec<SymMatrix> = kernel
        .column_iter()
        .map(|c| {
            let mut x = SymMatrix::zeros(n);
            for (k, &(p, q)) in unknowns.iter().enumerate() {
                x.set(p, q, c[k]);
            }
            x
        })
        .collect();
    let dense_m = m.to_dense();
    let max_residual = witnesses
        .iter()
        .map(|x| (&dense_m * x.to_dense()).abs().max())
        .fold(0.0, f64::max);
    Ok(SapReport {
        kernel_dim: witnesses.len(),
        unknowns: unknowns.len(),
        witnesses,
        max_residual,
        tol,
    })
}

pub fn has_sap(g: &Graph, m: &SymMatrix, tol: Option<f64>) -> Result<bool> {
    Ok(sap_kernel(g, m, tol)?.kernel_dim == 0)
}

/// Exact nullity of the SAP system for a rational matrix.
pub fn sap_kernel_dim_exact(g: &Graph, m: &RatSymMatrix) -> Result<usize> {
    check_dims(g, m.n())?;
    let unknowns = g.non_edges();
    let rows: Vec<Vec<BigRational>> = sap_system(g, m, &unknowns);
    Ok(unknowns.len() - rank_exact(rows))
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadricReport {
    pub kernel_dim: usize,
    /// Symmetric d×d forms N with `u_iᵀ N u_i = 0` for every vertex and
    /// `u_iᵀ N u_j = 0` for every edge.
    #[serde(serialize_with = "crate::io::serialize_sym_vec")]
    pub witnesses: Vec<SymMatrix>,
    pub max_residual: f64,
    pub tol: f64,
}

fn quadric_pairs(g: &Graph) -> Vec<(usize, usize)> {
    (0..g.n()).map(|i| (i, i)).chain(g.edges().iter().copied()).collect()
}

fn form_value(n: &SymMatrix, x: &[f64], y: &[f64]) -> f64 {
    let d = n.n();
    let mut s = 0.0;
    for a in 0..d {
        for b in 0..d {
            s += x[a] * n.get(a, b) * y[b];
        }
    }
    s
}

/// Kernel of the linear system on symmetric N; zero iff `|G|` lies in no
/// homogeneous quadric. Default `tol` is `1e-9 * rows * max|coefficient|`.
pub fn quadric_kernel(g: &Graph, u: &NullspaceEmbedding, tol: Option<f64>) -> Result<QuadricReport> {
    let d = u.d();
    if d == 0 {
        return Err(Error::EmptyEmbedding);
    }
    check_dims(g, u.n())?;
    let params: Vec<(usize, usize)> = (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect();
    let pairs = quadric_pairs(g);
    let system = DMatrix::from_fn(pairs.len(), params.len(), |r, c| {
        let (i, j) = pairs[r];
        let (a, b) = params[c];
        let (ui, uj) = (&u.vectors[i], &u.vectors[j]);
        if a == b {
            ui[a] * uj[a]
        } else {
            ui[a] * uj[b] + ui[b] * uj[a]
        }
    });
    let tol = tol.unwrap_or_else(|| 1e-9 * pairs.len() as f64 * system.abs().max());
    let kernel = nullspace(&system, tol);
    let witnesses: Vec<SymMatrix> = kernel
        .column_iter()
        .map(|c| {
            let mut nform = SymMatrix::zeros(d);
            for (k, &(a, b)) in params.iter().enumerate() {
                nform.set(a, b, c[k]);
            }
            nform
        })
        .collect();
    let max_residual = witnesses
        .iter()
        .flat_map(|nf| pairs.iter().map(move |&(i, j)| form_value(nf, &u.vectors[i], &u.vectors[j]).abs()))
        .fold(0.0, f64::max);
    Ok(QuadricReport {
        kernel_dim: witnesses.len(),
        witnesses,
        max_residual,
        tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop1Report {
    pub corank: usize,
    pub sap_kernel_dim: usize,
    pub quadric_kernel_dim: usize,
    pub dims_equal: bool,
    /// Largest violation of the SAP constraints (diagonal, edges, `MX`) by
    /// `UᵀNU` over all quadric witnesses N.
    pub mapped_max_residual: f64,
    /// Smallest Frobenius norm of a mapped witness; nonzero witnesses must map
    /// to nonzero X.
    pub mapped_min_norm: f64,
    /// Smallest singular value of U (rank-d diagnostic).
    pub u_min_singular: f64,
    pub ill_conditioned: bool,
    pub tol: f64,
    pub consistent: bool,
}

/// Checks that the SAP kernel and the quadric kernel have equal dimension and
/// that `N ↦ UᵀNU` carries quadric witnesses to SAP witnesses.
pub fn check_prop1(g: &Graph, m: &SymMatrix, tol: Option<f64>) -> Result<Prop1Report> {
    check_dims(g, m.n())?;
    let tol = tol.unwrap_or_else(|| m.default_tol());
    let spec = eigen_sym(m, Some(tol))?;
    if spec.corank() == 0 {
        return Err(Error::CorankZero);
    }
    let u = NullspaceEmbedding::from_kernel_basis(&spec.kernel_basis);
    let sap = sap_kernel(g, m, Some(tol))?;
    let quad = quadric_kernel(g, &u, None)?;
    let um = u.u_matrix();
    let u_min_singular = singular_values(&um.transpose()).last().copied().unwrap_or(0.0);
    let dense_m = m.to_dense();
    let mut mapped_max_residual: f64 = 0.0;
    let mut mapped_min_norm = f64::INFINITY;
    for nf in &quad.witnesses {
        let x = um.transpose() * nf.to_dense() * &um;
        mapped_min_norm = mapped_min_norm.min(x.norm());
        let mut worst = (&dense_m * &x).abs().max();
        for i in 0..g.n() {
            worst = worst.max(x[(i, i)].abs());
        }
        for &(i, j) in g.edges() {
            worst = worst.max(x[(i, j)].abs());
        }
        mapped_max_residual = mapped_max_residual.max(worst);
    }
    if quad.witnesses.is_empty() {
        mapped_min_norm = 0.0;
    }
    let dims_equal = sap.kernel_dim == quad.kernel_dim;
    let ill_conditioned = u_min_singular < 1e-8;
    Ok(Prop1Report {
        corank: spec.corank(),
        sap_kernel_dim: sap.kernel_dim,
        quadric_kernel_dim: quad.kernel_dim,
        dims_equal,
        mapped_max_residual,
        mapped_min_norm,
        u_min_singular,
        ill_conditioned,
        tol,
        consistent: dims_equal && mapped_max_residual <= tol && (quad.witnesses.is_empty() || mapped_min_norm > tol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadricClass {
    Irreducible,
    OneHyperplane,
    TwoHyperplanes,
}

/// Rank 1: one hyperplane; rank 2 with signature (1, 1): two hyperplanes;
/// anything else contains no hyperplane.
pub fn classify_quadric(n: &SymMatrix, tol: Option<f64>) -> Result<QuadricClass> {
    let tol = tol.unwrap_or_else(|| n.default_tol());
    if n.max_abs() <= tol {
        return Err(Error::ZeroForm);
    }
    let s = eigen_sym(n, Some(tol))?;
    Ok(match (s.neg_count, s.pos_count) {
        (1, 0) | (0, 1) => QuadricClass::OneHyperplane,
        (1, 1) => QuadricClass::TwoHyperplanes,
        _ => QuadricClass::Irreducible,
    })
}

/// Vectors `a, b` with `N = a bᵀ + b aᵀ` when N is reducible; the quadric is
/// then `{aᵀy = 0} ∪ {bᵀy = 0}`.
pub fn hyperplane_factors(n: &SymMatrix, tol: Option<f64>) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let tol = tol.unwrap_or_else(|| n.default_tol());
    let class = classify_quadric(n, Some(tol))?;
    let s = eigen_sym(n, Some(tol))?;
    let d = n.n();
    let lo = (s.eigenvalues[0], &s.eigenvectors[0]);
    let hi = (s.eigenvalues[d - 1], &s.eigenvectors[d - 1]);
    Ok(match class {
        QuadricClass::Irreducible => None,
        QuadricClass::OneHyperplane => {
            // N = λ p pᵀ = a bᵀ + b aᵀ with a = sqrt(|λ|/2) p, b = sign(λ) a
            let (lambda, p) = if hi.0.abs() >= lo.0.abs() { hi } else { lo };
            let scale = (lambda.abs() / 2.0).sqrt();
            let a: Vec<f64> = p.iter().map(|x| x * scale).collect();
            let b = a.iter().map(|x| x * lambda.signum()).collect();
            Some((a, b))
        }
        QuadricClass::TwoHyperplanes => {
            // x xᵀ - y yᵀ = (x + y)(x - y)ᵀ/2 + (x - y)(x + y)ᵀ/2
            let x: Vec<f64> = hi.1.iter().map(|v| v * hi.0.sqrt()).collect();
            let y: Vec<f64> = lo.1.iter().map(|v| v * (-lo.0).sqrt()).collect();
            let a = x.iter().zip(&y).map(|(p, q)| p + q).collect();
            let b = x.iter().zip(&y).map(|(p, q)| (p - q) / 2.0).collect();
            Some((a, b))
        }
    })
}
