//! Dense kernels, ranks and orthonormal bases used by the SAP, quadric and
//! geometry code.

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;

use crate::spectra::{jacobi, SymMatrix};

/// Orthonormal basis (as columns) of the numerical kernel of `a`.
///
/// Gauss-Jordan elimination with complete pivoting; elimination stops when
/// every remaining entry is `<= tol` in absolute value, and the number of
/// pivots taken is the numerical rank.
pub fn nullspace(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (rows, cols) = a.shape();
    let mut m = a.clone();
    let mut colperm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (0.0, rank, rank);
        for i in rank..rows {
            for j in rank..cols {
                let v = m[(i, j)].abs();
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        if best.0 <= tol {
            break;
        }
        m.swap_rows(rank, best.1);
        m.swap_columns(rank, best.2);
        colperm.swap(rank, best.2);
        let pivot = m[(rank, rank)];
        for j in rank..cols {
            m[(rank, j)] /= pivot;
        }
        for i in 0..rows {
            if i == rank {
                continue;
            }
            let f = m[(i, rank)];
            if f != 0.0 {
                for j in rank..cols {
                    let delta = f * m[(rank, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        rank += 1;
    }
    let free = cols - rank;
    let mut basis = DMatrix::<f64>::zeros(cols, free);
    for f in 0..free {
        let col = rank + f;
        basis[(colperm[col], f)] = 1.0;
        for p in 0..rank {
            basis[(colperm[p], f)] = -m[(p, col)];
        }
    }
    orthonormalize(&basis)
}

/// Modified Gram-Schmidt, applied twice; drops columns that collapse.
pub fn orthonormalize(cols: &DMatrix<f64>) -> DMatrix<f64> {
    let mut kept: Vec<DVector<f64>> = Vec::new();
    for c in cols.column_iter() {
        let mut v: DVector<f64> = c.into_owned();
        let original = v.norm();
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &kept {
                let d = q.dot(&v);
                v.axpy(-d, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 1e-12 * original {
            kept.push(v / norm);
        }
    }
    if kept.is_empty() {
        DMatrix::zeros(cols.nrows(), 0)
    } else {
        DMatrix::from_columns(&kept)
    }
}

/// Singular values of `a`, descending, from the eigenvalues of `aᵀa`.
/// Intended for small matrices where `sqrt` of the Gram spectrum resolves
/// the thresholds in use (around `1e-6`).
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.ncols() == 0 {
        return Vec::new();
    }
    let gram = a.transpose() * a;
    let (values, _, _) = jacobi(&SymMatrix::from_dense(&gram));
    values.iter().rev().map(|&x| x.max(0.0).sqrt()).collect()
}

/// Right singular vectors of `a` paired with singular values, ascending.
pub fn right_singular_pairs(a: &DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    let gram = a.transpose() * a;
    let (values, vectors, _) = jacobi(&SymMatrix::from_dense(&gram));
    values
        .into_iter()
        .zip(vectors)
        .map(|(l, v)| (l.max(0.0).sqrt(), DVector::from_vec(v)))
        .collect()
}

/// Exact rank over the rationals.
pub fn rank_exact(mut rows: Vec<Vec<BigRational>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..nrows {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &pivot;
            for c in col..ncols {
                let delta = &f * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
