//! Dense symmetric matrices, cyclic Jacobi eigendecomposition, and exact
//! inertia over the rationals.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Symmetric matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T = f64> {
    n: usize,
    lower: Vec<T>,
}

pub type RatSymMatrix = SymMatrix<BigRational>;

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl<T: Clone + Zero> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            lower: vec![T::zero(); n * (n + 1) / 2],
        }
    }

    /// Builds from a function evaluated on the lower triangle (`i >= j`).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                lower.push(f(i, j));
            }
        }
        SymMatrix { n, lower }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.lower[packed(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.lower[packed(i, j)] = value;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }
}

impl SymMatrix<f64> {
    /// Builds from full rows. Rows must be square and symmetric up to
    /// `1e-12` relative to the largest entry; the stored value is the average.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
        }
        let scale = rows.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in 0..n {
                if !rows[i][j].is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
                if (rows[i][j] - rows[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::Invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SymMatrix::from_fn(n, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Symmetric part of a dense square matrix.
    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        SymMatrix::from_fn(m.nrows(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| *self.get(i, j))
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `1e-9 * n * max|M_ij|`.
    pub fn default_tol(&self) -> f64 {
        1e-9 * self.n as f64 * self.max_abs()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }

    pub fn check_finite(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..=i {
                if !self.get(i, j).is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
            }
        }
        Ok(())
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.lower[packed(i, i)] += shift;
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SymMatrix {
            n: self.n,
            lower: self.lower.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix<f64>) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        Ok(SymMatrix {
            n: self.n,
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Exact rational value of every entry.
    pub fn to_rational(&self) -> RatSymMatrix {
        SymMatrix {
            n: self.n,
            lower: self
                .lower
                .iter()
                .map(|&x| BigRational::from_float(x).expect("finite entry"))
                .collect(),
        }
    }
}

impl SymMatrix<BigRational> {
    pub fn from_integers(rows: &[Vec<i64>]) -> Self {
        SymMatrix::from_fn(rows.len(), |i, j| BigRational::from_integer(BigInt::from(rows[i][j])))
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        use num_traits::ToPrimitive;
        SymMatrix {
            n: self.n,
            lower: self.lower.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }
}

/// Eigendecomposition summary. `eigenvectors[k]` belongs to `eigenvalues[k]`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub neg_count: usize,
    pub zero_count: usize,
    pub pos_count: usize,
    /// Orthonormal basis of the numerical kernel, `|λ| <= tol`.
    pub kernel_basis: Vec<Vec<f64>>,
    pub tol: f64,
    /// Off-diagonal Frobenius norm left when the rotations stopped.
    pub off_norm: f64,
}

impl SpectralSummary {
    pub fn corank(&self) -> usize {
        self.zero_count
    }

    /// `λ_k`, 1-based from below.
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }
}

/// Eigenvalues (ascending) and eigenvectors. `tol` defaults to `default_tol`.
pub fn eigen_sym(m: &SymMatrix, tol: Option<f64>) -> Result<SpectralSummary> {
    m.check_finite()?;
    let tol = tol.unwrap_or_else(|| m.default_tol());
    let (values, vectors, off_norm) = jacobi(m);
    let mut summary = SpectralSummary {
        eigenvalues: values,
        eigenvectors: vectors,
        neg_count: 0,
        zero_count: 0,
        pos_count: 0,
        kernel_basis: Vec::new(),
        tol,
        off_norm,
    };
    for (k, &lambda) in summary.eigenvalues.iter().enumerate() {
        if lambda.abs() <= tol {
            summary.zero_count += 1;
            summary.kernel_basis.push(summary.eigenvectors[k].clone());
        } else if lambda < 0.0 {
            summary.neg_count += 1;
        } else {
            summary.pos_count += 1;
        }
    }
    Ok(summary)
}

/// Cyclic Jacobi. Returns ascending eigenvalues, matching unit eigenvectors
/// and the final off-diagonal Frobenius norm.
pub(crate) fn jacobi(m: &SymMatrix) -> (Vec<f64>, Vec<Vec<f64>>, f64) {
    let n = m.n();
    let mut a = m.to_dense();
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = m.frobenius_norm();
    let off = |a: &DMatrix<f64>| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[(p, q)] * a[(p, q)];
                }
            }
        }
        s.sqrt()
    };
    const MAX_SWEEPS: usize = 100;
    let target = 1e-15 * norm;
    let mut current = off(&a);
    for _ in 0..MAX_SWEEPS {
        if current <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        let next = off(&a);
        // rounding floor reached
        if next >= current && next <= 1e-12 * norm {
            current = next;
            break;
        }
        current = next;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].total_cmp(&a[(y, y)]));
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let vectors = order.iter().map(|&k| v.column(k).iter().copied().collect()).collect();
    (values, vectors, current)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub neg: usize,
    pub zero: usize,
    pub pos: usize,
}

/// Exact inertia by symmetric LDLᵀ over the rationals. A nonzero diagonal
/// pivot is taken when one exists; otherwise a 2×2 pivot on a nonzero
/// off-diagonal entry (its block `[[0, a], [a, 0]]` contributes one negative
/// and one positive eigenvalue). Sylvester's law makes the pivot counts the
/// inertia.
pub fn inertia_exact(m: &RatSymMatrix) -> Inertia {
    let n = m.n();
    let mut a = m.rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Inertia { neg: 0, zero: 0, pos: 0 };
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.remove(pos);
            let d = a[p][p].clone();
            if d.is_negative() {
                out.neg += 1;
            } else {
                out.pos += 1;
            }
            for &j in &active {
                if a[j][p].is_zero() {
                    continue;
                }
                let factor = &a[j][p] / &d;
                for &k in &active {
                    let delta = &factor * &a[p][k];
                    a[j][k] -= delta;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j))
        });
        let Some((p, q)) = pair else {
            out.zero += active.len();
            break;
        };
        active.retain(|&i| i != p && i != q);
        out.neg += 1;
        out.pos += 1;
        let off = a[p][q].clone();
        // S = A_rr - B E^{-1} B^T with E^{-1} = [[0, 1/off], [1/off, 0]]
        let mut update = Vec::with_capacity(active.len() * active.len());
        for &j in &active {
            for &k in &active {
                let num = &a[j][p] * &a[q][k] + &a[j][q] * &a[p][k];
                update.push(num / &off);
            }
        }
        let mut it = update.into_iter();
        for &j in &active {
            for &k in &active {
                let u = it.next().expect("one update per active pair");
                a[j][k] -= u;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn neg_j(n: usize) -> SymMatrix {
        SymMatrix::from_fn(n, |_, _| -1.0)
    }

    #[test]
    fn spectrum_of_negative_all_ones() {
        let s = eigen_sym(&neg_j(4), None).unwrap();
        let expect = [-4.0, 0.0, 0.0, 0.0];
        for (a, b) in s.eigenvalues.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_eq!((s.neg_count, s.zero_count, s.pos_count), (1, 3, 0));
        assert_eq!(s.kernel_basis.len(), 3);
    }

    #[test]
    fn identity_and_two_by_two() {
        let s = eigen_sym(&SymMatrix::identity(3), None).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert_eq!((s.neg_count, s.zero_count), (0, 0));
        let m = SymMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        let s = eigen_sym(&m, None).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert_eq!(s.neg_count, 1);
    }

    #[test]
    fn non_finite_is_rejected() {
        let mut m = SymMatrix::identity(2);
        m.set(1, 0, f64::NAN);
        assert_eq!(eigen_sym(&m, None).unwrap_err(), Error::NonFinite(1, 0));
    }

    #[test]
    fn asymmetric_rows_are_rejected() {
        assert!(SymMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(SymMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn exact_inertia_examples() {
        let j4 = RatSymMatrix::from_integers(&vec![vec![-1; 4]; 4]);
        assert_eq!(inertia_exact(&j4), Inertia { neg: 1, zero: 3, pos: 0 });
        let d = RatSymMatrix::from_integers(&[vec![-2, 0, 0], vec![0, 0, 0], vec![0, 0, 5]]);
        assert_eq!(inertia_exact(&d), Inertia { neg: 1, zero: 1, pos: 1 });
        // zero diagonal forces a 2x2 pivot
        let h = RatSymMatrix::from_integers(&[vec![0, 3, 1], vec![3, 0, 2], vec![1, 2, 0]]);
        let s = eigen_sym(&h.to_f64(), None).unwrap();
        let i = inertia_exact(&h);
        assert_eq!((i.neg, i.zero, i.pos), (s.neg_count, s.zero_count, s.pos_count));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = neg_j(5);
        let s = eigen_sym(&m, None).unwrap();
        for b in &s.kernel_basis {
            let r = m.mul_vec(b);
            assert!(r.iter().all(|x| x.abs() <= s.tol));
        }
    }
}
